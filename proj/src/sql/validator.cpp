#include "hazardrag/sql/validator.hpp"

#include "hazardrag/text.hpp"

#include <algorithm>

namespace hazardrag::sql {
namespace {

struct Failure {
    RejectReason reason;
    std::string message;
};

[[noreturn]] void reject(RejectReason reason, std::string message) {
    throw Failure{reason, std::move(message)};
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && text::to_lower(a) == text::to_lower(b);
}

struct ScopeEntry {
    const knowledge::TableDecl* decl = nullptr;
    std::string ref;  // alias if given, else the canonical table name
    bool aliased = false;
};

enum class AliasMode { None, PreferAlias, Fallback };

struct Ctx {
    std::size_t visible = 0;  // tables [0, visible) are in scope
    AliasMode aliases = AliasMode::None;
};

class Resolver {
public:
    Resolver(const knowledge::StructuredStore& store, ValidatedSql& out) : store_(store), out_(out) {}

    void run(SelectStatement& st) {
        add_table(st.from);
        for (auto& item : st.items) {
            if (item.alias) select_aliases_.push_back(*item.alias);
        }
        for (std::size_t i = 0; i < st.joins.size(); ++i) {
            add_table(st.joins[i].table);
            resolve(*st.joins[i].on, Ctx{scope_.size(), AliasMode::None});
            check_join(*st.joins[i].on, scope_.size() - 1);
        }
        const Ctx all{scope_.size(), AliasMode::None};
        for (auto& item : st.items) {
            if (const auto* star = std::get_if<Star>(&item.expr->node)) {
                expand_star(*star);
            } else {
                resolve(*item.expr, all);
            }
        }
        if (st.where) resolve(*st.where, all);
        for (auto& g : st.group_by) resolve(*g, Ctx{scope_.size(), AliasMode::Fallback});
        if (st.having) resolve(*st.having, Ctx{scope_.size(), AliasMode::Fallback});
        for (auto& o : st.order_by) resolve(*o.expr, Ctx{scope_.size(), AliasMode::PreferAlias});
        if (scope_.size() == 1) unqualify(st);
    }

private:
    void add_table(TableRef& ref) {
        const auto* decl = store_.find_table(ref.name);
        if (!decl) reject(RejectReason::SchemaMismatch, "unknown table " + ref.name);
        ref.name = decl->name;
        ScopeEntry entry{decl, ref.alias ? *ref.alias : decl->name, ref.alias.has_value()};
        for (const auto& existing : scope_) {
            if (iequals(existing.ref, entry.ref)) {
                reject(RejectReason::SchemaMismatch, "duplicate table reference " + entry.ref);
            }
        }
        out_.tables_used.insert(decl->name);
        scope_.push_back(std::move(entry));
    }

    std::size_t find_scope(const std::string& qualifier, std::size_t visible) const {
        for (std::size_t i = 0; i < visible; ++i) {
            if (iequals(scope_[i].ref, qualifier)) return i;
        }
        for (std::size_t i = 0; i < visible; ++i) {
            if (scope_[i].aliased && iequals(scope_[i].decl->name, qualifier)) {
                reject(RejectReason::SchemaMismatch,
                       "table " + scope_[i].decl->name + " must be referenced by its alias " + scope_[i].ref);
            }
        }
        reject(RejectReason::SchemaMismatch, "unknown table reference " + qualifier);
    }

    void use_column(const ScopeEntry& entry, const knowledge::ColumnDecl& col) {
        out_.columns_used.insert(entry.decl->name + "." + col.name);
    }

    const std::string* match_alias(const std::string& name) const {
        for (const auto& a : select_aliases_) {
            if (iequals(a, name)) return &a;
        }
        return nullptr;
    }

    void resolve_column(ColumnRef& ref, const Ctx& ctx) {
        if (ref.qualifier) {
            const auto& entry = scope_[find_scope(*ref.qualifier, ctx.visible)];
            const auto* col = entry.decl->find_column(ref.name);
            if (!col) {
                reject(RejectReason::SchemaMismatch, "unknown column " + *ref.qualifier + "." + ref.name);
            }
            ref.qualifier = entry.ref;
            ref.name = col->name;
            use_column(entry, *col);
            return;
        }
        if (ctx.aliases == AliasMode::PreferAlias) {
            if (const auto* alias = match_alias(ref.name)) {
                ref.name = *alias;
                ref.select_alias = true;
                return;
            }
        }
        const ScopeEntry* owner = nullptr;
        const knowledge::ColumnDecl* found = nullptr;
        for (std::size_t i = 0; i < ctx.visible; ++i) {
            if (const auto* col = scope_[i].decl->find_column(ref.name)) {
                if (owner) reject(RejectReason::SchemaMismatch, "ambiguous column " + ref.name);
                owner = &scope_[i];
                found = col;
            }
        }
        if (!owner) {
            if (ctx.aliases == AliasMode::Fallback) {
                if (const auto* alias = match_alias(ref.name)) {
                    ref.name = *alias;
                    ref.select_alias = true;
                    return;
                }
            }
            reject(RejectReason::SchemaMismatch, "unknown column " + ref.name);
        }
        ref.qualifier = owner->ref;
        ref.name = found->name;
        use_column(*owner, *found);
    }

    void expand_star(const Star& star) {
        if (star.qualifier) {
            const auto& entry = scope_[find_scope(*star.qualifier, scope_.size())];
            for (const auto& c : entry.decl->columns) use_column(entry, c);
            return;
        }
        for (const auto& entry : scope_) {
            for (const auto& c : entry.decl->columns) use_column(entry, c);
        }
    }

    void check_function(FunctionCall& call) {
        const auto& allowed = allowed_functions();
        if (std::find(allowed.begin(), allowed.end(), call.name) == allowed.end()) {
            reject(RejectReason::ForbiddenOperation, "function " + call.name + " is not allowed");
        }
        const bool has_star = call.args.size() == 1 && std::holds_alternative<Star>(call.args[0]->node);
        if (has_star) {
            const auto& star = std::get<Star>(call.args[0]->node);
            if (call.name != "COUNT" || call.distinct || star.qualifier) {
                reject(RejectReason::Unparsable, "'*' is only valid as COUNT(*)");
            }
            return;
        }
        const std::size_t n = call.args.size();
        const bool arity_ok = call.name == "ROUND" ? (n == 1 || n == 2) : n == 1;
        if (!arity_ok) reject(RejectReason::Unparsable, "wrong number of arguments to " + call.name);
        if (call.distinct && call.name != "COUNT" && call.name != "SUM" && call.name != "AVG" &&
            call.name != "MIN" && call.name != "MAX") {
            reject(RejectReason::Unparsable, "DISTINCT is only valid inside an aggregate");
        }
    }

    void resolve(Expr& e, const Ctx& ctx) {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ColumnRef>) {
                    resolve_column(n, ctx);
                } else if constexpr (std::is_same_v<T, Star>) {
                    reject(RejectReason::Unparsable, "'*' is not valid here");
                } else if constexpr (std::is_same_v<T, FunctionCall>) {
                    check_function(n);
                    if (n.args.size() == 1 && std::holds_alternative<Star>(n.args[0]->node)) return;
                    for (auto& a : n.args) resolve(*a, ctx);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    resolve(*n.operand, ctx);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    resolve(*n.lhs, ctx);
                    resolve(*n.rhs, ctx);
                } else if constexpr (std::is_same_v<T, IsNull>) {
                    resolve(*n.operand, ctx);
                } else if constexpr (std::is_same_v<T, InList>) {
                    resolve(*n.operand, ctx);
                    for (auto& item : n.items) resolve(*item, ctx);
                } else if constexpr (std::is_same_v<T, Between>) {
                    resolve(*n.operand, ctx);
                    resolve(*n.low, ctx);
                    resolve(*n.high, ctx);
                }
            },
            e.node);
    }

    // With a single table in scope qualifiers carry no information. A column
    // whose name is also a select alias keeps its qualifier so re-reading the
    // printed statement resolves it the same way.
    void unqualify(SelectStatement& st) const {
        for (auto& item : st.items) unqualify(*item.expr);
        if (st.where) unqualify(*st.where);
        for (auto& g : st.group_by) unqualify(*g);
        if (st.having) unqualify(*st.having);
        for (auto& o : st.order_by) unqualify(*o.expr);
    }

    void unqualify(Expr& e) const {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ColumnRef>) {
                    if (!n.select_alias && !match_alias(n.name)) n.qualifier.reset();
                } else if constexpr (std::is_same_v<T, Star>) {
                    n.qualifier.reset();
                } else if constexpr (std::is_same_v<T, FunctionCall>) {
                    for (auto& a : n.args) unqualify(*a);
                } else if constexpr (std::is_same_v<T, Unary> || std::is_same_v<T, IsNull>) {
                    unqualify(*n.operand);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    unqualify(*n.lhs);
                    unqualify(*n.rhs);
                } else if constexpr (std::is_same_v<T, InList>) {
                    unqualify(*n.operand);
                    for (auto& item : n.items) unqualify(*item);
                } else if constexpr (std::is_same_v<T, Between>) {
                    unqualify(*n.operand);
                    unqualify(*n.low);
                    unqualify(*n.high);
                }
            },
            e.node);
    }

    static void flatten_and(const Expr& e, std::vector<const Expr*>& out) {
        if (const auto* b = std::get_if<Binary>(&e.node); b && b->op == "AND") {
            flatten_and(*b->lhs, out);
            flatten_and(*b->rhs, out);
            return;
        }
        out.push_back(&e);
    }

    bool is_join_key(const std::string& column) const {
        for (const auto& key : store_.join_keys()) {
            if (iequals(key, column)) return true;
        }
        return false;
    }

    // Every conjunct must equate the same declared join key across two
    // different tables, and at least one must tie the new table to an
    // earlier one.
    void check_join(const Expr& on, std::size_t new_table) {
        std::vector<const Expr*> conjuncts;
        flatten_and(on, conjuncts);
        bool links_new = false;
        for (const Expr* c : conjuncts) {
            const auto* eq = std::get_if<Binary>(&c->node);
            const ColumnRef* lhs = eq && eq->op == "=" ? std::get_if<ColumnRef>(&eq->lhs->node) : nullptr;
            const ColumnRef* rhs = eq && eq->op == "=" ? std::get_if<ColumnRef>(&eq->rhs->node) : nullptr;
            if (!lhs || !rhs) {
                reject(RejectReason::InvalidJoin, "join condition must be equality on a join key: " + to_sql(*c));
            }
            const std::size_t li = find_scope(*lhs->qualifier, new_table + 1);
            const std::size_t ri = find_scope(*rhs->qualifier, new_table + 1);
            if (li == ri) reject(RejectReason::InvalidJoin, "join condition compares a table with itself");
            if (!iequals(lhs->name, rhs->name) || !is_join_key(lhs->name)) {
                reject(RejectReason::InvalidJoin,
                       "join columns " + lhs->name + " and " + rhs->name + " are not a declared join key");
            }
            links_new = links_new || li == new_table || ri == new_table;
        }
        if (!links_new) {
            reject(RejectReason::InvalidJoin, "join condition does not reference " + scope_[new_table].ref);
        }
    }

    const knowledge::StructuredStore& store_;
    ValidatedSql& out_;
    std::vector<ScopeEntry> scope_;
    std::vector<std::string> select_aliases_;
};

}  // namespace

const std::vector<std::string>& allowed_functions() {
    static const std::vector<std::string> names = {"COUNT", "SUM", "AVG", "MIN", "MAX", "ROUND", "ABS"};
    return names;
}

ValidatedSql Validator::validate(std::string_view sql) const {
    ValidatedSql out;
    out.statement = text::trim(sql);
    ParseOutcome parsed = parse_select(sql);
    if (!parsed.statement) {
        out.verdict = Verdict{false, parsed.reason, parsed.message};
        return out;
    }
    try {
        Resolver(store_, out).run(*parsed.statement);
    } catch (const Failure& f) {
        out.verdict = Verdict{false, f.reason, f.message};
        return out;
    }
    out.statement = to_sql(*parsed.statement);
    out.verdict = Verdict{true, RejectReason::Unparsable, {}};
    out.accepted = AcceptedSql(out.statement);
    return out;
}

}  // namespace hazardrag::sql
