// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "hazardrag/error.hpp"
#include "hazardrag/eval/grid.hpp"
#include "hazardrag/eval/metrics.hpp"
#include "hazardrag/eval/synthetic.hpp"
#include "hazardrag/memory/memory_bank.hpp"
#include "hazardrag/query/router.hpp"
#include "hazardrag/query/understanding.hpp"
#include "hazardrag/retrieval/bm25.hpp"
#include "hazardrag/retrieval/context.hpp"
#include "hazardrag/retrieval/embedding.hpp"
#include "hazardrag/retrieval/fusion.hpp"
#include "hazardrag/retrieval/pipeline.hpp"
#include "hazardrag/retrieval/rerank.hpp"
#include "hazardrag/sql/executor.hpp"
#include "hazardrag/sql/validator.hpp"
#include "hazardrag/text.hpp"
#include "sql_corpus.hpp"
#include "test_support.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hazardrag;
using Clock = std::chrono::steady_clock;

namespace {

struct Failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failed(what);
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

int failures = 0;

// Fails the criterion when the body throws Failed or overruns its time limit.
void criterion(int number, const std::string& name, double limit_ms, const std::function<std::string()>& body) {
    const auto start = Clock::now();
    std::string status = "PASS";
    std::string detail;
    try {
        detail = body();
    } catch (const Failed& f) {
        status = "FAIL";
        detail = f.what();
    } catch (const std::exception& e) {
        status = "FAIL";
        detail = std::string("unexpected exception: ") + e.what();
    }
    const double ms = elapsed_ms(start);
    if (status == "PASS" && ms >= limit_ms) {
        status = "FAIL";
        detail = "over the " + std::to_string(static_cast<long>(limit_ms)) + " ms limit";
    }
    if (status == "FAIL") ++failures;
    std::printf("%s [%02d] %s (%.1f ms)%s%s\n", status.c_str(), number, name.c_str(), ms,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
}

// --- metrics --------------------------------------------------------------

std::string metrics() {
    std::vector<std::string> gold(25);
    std::vector<std::string> pred(25);
    for (std::size_t i = 0; i < 25; ++i) {
        gold[i] = std::string(1, static_cast<char>('A' + i % 4));
        pred[i] = i < 19 ? gold[i] : std::string(1, static_cast<char>('A' + (i + 1) % 4));
    }
    const double acc = eval::mcq_accuracy(pred, gold);
    require(acc == 0.76, "19/25 gave " + num(acc));
    require(eval::mcq_accuracy(gold, gold) == 1.0, "all-correct is not 1.0");

    eval::OracleJudge judge;
    const std::vector<std::string> keypoints = {"bottled water", "flashlight", "first aid kit", "generator fuel"};
    const double cov = eval::keypoint_coverage(keypoints, "Keep bottled water, a flashlight and a first aid kit ready.", judge);
    require(std::fabs(cov - 0.75) <= 1e-12, "3/4 keypoints gave " + num(cov));
    return "accuracy 0.76, coverage " + num(cov);
}

// --- keyword scoring ------------------------------------------------------

std::string bm25() {
    testkit::Rng rng(101);
    std::size_t compared = 0;
    double worst = 0.0;
    for (int c = 0; c < 5; ++c) {
        const auto corpus = testkit::random_corpus(rng, testkit::uniform(rng, 3, 20));
        const auto index = retrieval::InvertedIndex::build(corpus);
        std::vector<std::vector<std::string>> docs;
        for (const auto& p : corpus.passages()) docs.push_back(testkit::oracle_terms(p.text));
        for (int q = 0; q < 12; ++q) {
            const auto query = testkit::random_sentence(rng, testkit::uniform(rng, 1, 5));
            const auto terms = testkit::oracle_terms(query);
            std::map<std::string, double> got;
            for (const auto& r : retrieval::keyword_search(query, corpus.count(), index)) got[r.passage_id] = r.score;
            for (std::size_t d = 0; d < docs.size(); ++d) {
                const auto& id = corpus.passages()[d].id;
                const bool shares = std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
                    return std::find(docs[d].begin(), docs[d].end(), t) != docs[d].end();
                });
                if (!shares) {
                    require(!got.count(id), id + " scored without sharing a term");
                    continue;
                }
                require(got.count(id) == 1, id + " missing for '" + query + "'");
                const double want = testkit::bm25_oracle(docs, d, terms);
                worst = std::max(worst, std::fabs(got[id] - want));
                require(std::fabs(got[id] - want) <= 1e-6, id + ": " + num(got[id]) + " vs oracle " + num(want));
                ++compared;
            }
        }
    }
    return std::to_string(compared) + " scores over 5 corpora, max |diff| " + num(worst);
}

// --- hybrid fusion --------------------------------------------------------

std::vector<retrieval::ScoredPassage> ranked(retrieval::Channel c, std::vector<std::pair<std::string, double>> entries) {
    std::vector<retrieval::ScoredPassage> out;
    for (auto& [id, s] : entries) out.push_back({id, c, s});
    retrieval::sort_ranked(out);
    return out;
}

std::string fusion() {
    using retrieval::Channel;
    const auto worked = retrieval::hybrid_merge(ranked(Channel::Keyword, {{"p1", 4}, {"p2", 2}}),
                                                ranked(Channel::Vector, {{"p2", 0.9}, {"p3", 0.45}}));
    require(worked.size() == 3, "worked example size");
    require(worked[0].passage_id == "p2" && worked[1].passage_id == "p1" && worked[2].passage_id == "p3",
            "worked example order");
    require(std::fabs(worked[0].score - 0.75) <= 1e-12 && std::fabs(worked[1].score - 0.5) <= 1e-12 &&
                std::fabs(worked[2].score - 0.25) <= 1e-12,
            "worked example scores");

    testkit::Rng rng(103);
    for (int round = 0; round < 500; ++round) {
        auto channel = [&](Channel c) {
            std::vector<std::pair<std::string, double>> e;
            for (std::size_t i = 0; i < 15; ++i) {
                if (testkit::uniform(rng, 0, 2) == 0) continue;
                e.emplace_back("p" + std::to_string(i), static_cast<double>(testkit::uniform(rng, 1, 500)) / 7.0);
            }
            return ranked(c, std::move(e));
        };
        const auto kw = channel(Channel::Keyword);
        const auto vec = channel(Channel::Vector);
        const auto merged = retrieval::hybrid_merge(kw, vec);
        double kmax = 0.0, vmax = 0.0;
        for (const auto& k : kw) kmax = std::max(kmax, k.score);
        for (const auto& v : vec) vmax = std::max(vmax, v.score);
        std::map<std::string, double> want;
        for (const auto& k : kw) want[k.passage_id] += 0.5 * k.score / kmax;
        for (const auto& v : vec) want[v.passage_id] += 0.5 * v.score / vmax;
        require(merged.size() == want.size(), "merged is not the union of both channels");
        for (std::size_t i = 0; i < merged.size(); ++i) {
            const auto& m = merged[i];
            require(std::fabs(m.score - want[m.passage_id]) <= 1e-12, m.passage_id + " fused score");
            require(m.score > 0.0 && m.score <= 1.0, "fused score outside (0, 1]");
            if (i) require(retrieval::ranks_before(merged[i - 1], m), "merged output out of order");
        }
        if (!kw.empty() && !vec.empty() && kw[0].passage_id == vec[0].passage_id) {
            require(std::fabs(merged[0].score - 1.0) <= 1e-12, "shared top passage should score 1");
        }
        const auto kw_only = retrieval::hybrid_merge(kw, {});
        for (std::size_t i = 0; i < kw.size(); ++i) {
            require(kw_only[i].passage_id == kw[i].passage_id, "single-channel merge reordered");
        }
    }
    return "worked example plus 500 randomized merges";
}

// --- rerank ---------------------------------------------------------------

std::string rerank_transcript(std::uint64_t seed, std::size_t cases, bool check_oracle) {
    testkit::Rng rng(seed);
    const auto corpus = testkit::random_corpus(rng, 80);
    std::ostringstream out;
    for (std::size_t round = 0; round < cases; ++round) {
        const std::size_t size = testkit::uniform(rng, 0, 80);
        std::vector<retrieval::ScoredPassage> entries;
        for (std::size_t i = 0; i < size; ++i) {
            entries.push_back({corpus.passages()[i].id, retrieval::Channel::Merged,
                               1.0 / static_cast<double>(i + 1 + testkit::uniform(rng, 0, 3))});
        }
        const auto pool = retrieval::build_candidate_pool(entries, size);
        const std::size_t k = testkit::uniform(rng, 1, 20);
        const std::size_t batch = testkit::uniform(rng, 1, 32);
        const auto query = testkit::random_sentence(rng, 3);
        testkit::HashScorer scorer;
        const auto got = retrieval::rerank(query, pool, k, scorer, batch, corpus);
        require(!got.degraded, "unexpected degraded rerank");
        require(got.passages.size() == std::min(k, pool.entries.size()), "rerank returned the wrong count");

        if (check_oracle) {
            std::vector<retrieval::ScoredPassage> oracle;
            for (const auto& e : pool.entries) {
                oracle.push_back({e.passage_id, retrieval::Channel::Reranked,
                                  testkit::HashScorer::score_one(query, corpus.find(e.passage_id)->text)});
            }
            std::stable_sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
                return a.score != b.score ? a.score > b.score : a.passage_id < b.passage_id;
            });
            oracle.resize(std::min(k, oracle.size()));
            require(got.passages == oracle, "case " + std::to_string(round) + " differs from the exhaustive sort");
            const std::size_t batches = pool.entries.empty() ? 0 : (pool.entries.size() + batch - 1) / batch;
            require(scorer.calls == batches, "case " + std::to_string(round) + " used the wrong number of batches");
        }
        for (const auto& p : got.passages) out << p.passage_id << ':' << num(p.score) << ' ';
        out << '\n';
    }
    return out.str();
}

std::string rerank() {
    const auto first = rerank_transcript(107, 1000, true);
    const auto second = rerank_transcript(107, 1000, false);
    require(first == second, "two runs produced different orderings");
    return "1000 cases match the oracle; reruns byte-identical (" + std::to_string(first.size()) + " bytes)";
}

// --- context budgets ------------------------------------------------------

knowledge::Passage sized_passage(const std::string& id, std::size_t tokens) {
    knowledge::Passage p;
    p.id = id;
    p.source_id = "src-" + id;
    for (std::size_t i = 0; i < tokens; ++i) p.text += (i ? " t" : "t") + std::to_string(i);
    p.token_count = tokens;
    return p;
}

std::string context_budgets() {
    const std::vector<knowledge::Passage> three = {sized_passage("a", 2500), sized_passage("b", 2500),
                                                   sized_passage("c", 2500)};
    const auto mcq = retrieval::assemble_context(three, TaskKind::Mcq);
    std::size_t total = 0;
    for (const auto& u : mcq.units) total += text::count_tokens(u.text);
    require(total == 6000, "3 x 2500 gave " + std::to_string(total));
    require(mcq.units.size() == 3 && text::count_tokens(mcq.units[2].text) == 1000, "third passage not cut to 1000");

    testkit::Rng rng(109);
    for (int round = 0; round < 500; ++round) {
        std::vector<knowledge::Passage> ps;
        for (std::size_t i = 0, n = testkit::uniform(rng, 0, 12); i < n; ++i) {
            ps.push_back(sized_passage(std::to_string(i), testkit::uniform(rng, 1, 2000)));
        }
        std::size_t input = 0;
        for (const auto& p : ps) input += p.token_count;
        const auto m = retrieval::assemble_context(ps, TaskKind::Mcq);
        std::size_t sum = 0;
        for (const auto& u : m.units) sum += text::count_tokens(u.text);
        require(sum <= retrieval::kMcqContextBudget, "multiple-choice context over budget");
        require(sum == std::min(input, retrieval::kMcqContextBudget), "multiple-choice context not filled greedily");
        for (auto task : {TaskKind::OpenEnded, TaskKind::Interactive}) {
            const auto c = retrieval::assemble_context(ps, task);
            require(c.units.size() == ps.size(), "per-passage context dropped a passage");
            for (std::size_t i = 0; i < ps.size(); ++i) {
                const auto n = text::count_tokens(c.units[i].text);
                require(n == std::min(ps[i].token_count, retrieval::kPassageTokenBudget), "per-passage cap not applied");
            }
        }
    }
    return "3 x 2500 -> 6000; 500 randomized passage sets";
}

// --- SQL guard ------------------------------------------------------------

std::string sql_guard() {
    const auto store = testkit::impact_store();
    const auto hostile = testkit::hostile_sql_corpus(113, 600);
    require(hostile.size() >= 500, "hostile corpus too small");
    std::size_t accepted = 0;
    std::string example;
    for (const auto& q : hostile) {
        const auto v = sql::validate_sql(q, store);
        if (v.verdict.accepted || v.accepted) {
            ++accepted;
            if (example.empty()) example = q;
        }
    }
    require(accepted == 0, std::to_string(accepted) + " hostile inputs accepted, e.g. " + example);

    const auto& good = testkit::accepted_select_corpus();
    require(good.size() >= 20, "hand-written corpus too small");
    for (const auto& q : good) {
        const auto v = sql::validate_sql(q, store);
        require(v.verdict.accepted && v.accepted, "rejected: " + q + " (" + v.verdict.message + ")");
        sql::execute_sql(*v.accepted, store);
    }

    const auto drop = sql::validate_sql("DROP TABLE harvey_evacuation_data", store);
    require(!drop.verdict.accepted && drop.verdict.reason == sql::RejectReason::ForbiddenOperation,
            "DROP not rejected as ForbiddenOperation");
    return std::to_string(hostile.size()) + " hostile rejected, " + std::to_string(good.size()) + " SELECTs accepted";
}

// --- end-to-end scenarios -------------------------------------------------

std::string evacuation_scenario() {
    auto store = std::make_shared<const knowledge::StructuredStore>(testkit::evacuation_store());
    auto engine = testkit::scenario_engine(testkit::evacuation_model(), store, nullptr);
    const auto r = engine->handle_query(engine->create_session(), testkit::kEvacuationQuery);
    require(r.pathway == Pathway::StructuredAccess, "pathway is " + std::string(to_label(r.pathway)));
    require(r.evidence_pathway == Pathway::StructuredAccess, "evidence came from elsewhere");
    require(r.sql.has_value(), "no SQL recorded");

    // Re-run the recorded statement to inspect the rows the answer was grounded on.
    const auto v = sql::validate_sql(*r.sql, *store);
    require(v.accepted.has_value(), "recorded SQL no longer validates");
    const auto rows = sql::execute_sql(*v.accepted, *store);
    require(rows.rows.size() == 3, "expected 3 rows, got " + std::to_string(rows.rows.size()));
    auto cell = [&](std::size_t r_, std::size_t c) { return knowledge::to_display(rows.rows[r_][c]); };
    require(cell(0, 0) == "77061" && cell(0, 1) == "57.14", "first row is " + cell(0, 0) + " " + cell(0, 1));
    const std::set<std::string> tied = {cell(1, 0), cell(2, 0)};
    require(tied == std::set<std::string>{"77025", "77005"}, "rows 2-3 are not 77025 and 77005");
    require(cell(1, 1) == "55.56" && cell(2, 1) == "55.56", "rows 2-3 are not 55.56");
    return *r.sql + " -> 77061 57.14, then 77025/77005 55.56";
}

std::string flood_scenario() {
    auto engine = testkit::scenario_engine(testkit::flood_model(), nullptr, testkit::flood_search());
    const auto r = engine->handle_query(engine->create_session(), testkit::kFloodPredictionQuery);
    require(r.pathway == Pathway::WebFallback, "pathway is " + std::string(to_label(r.pathway)));
    require(!r.sources.empty(), "no sources");
    for (const auto& s : r.sources) require(s != testkit::kFloridaUrl, "Florida snippet survived filtering");
    return std::to_string(r.sources.size()) + " sources, Florida excluded";
}

// --- routing --------------------------------------------------------------

std::string routing() {
    std::size_t combos = 0;
    for (auto type : kAllQueryTypes) {
        for (bool in_domain : {true, false}) {
            Pathway want = Pathway::DocumentRetrieval;
            if (!in_domain) {
                want = Pathway::WebFallback;
            } else if (type == QueryType::Quantitative) {
                want = Pathway::StructuredAccess;
            }
            // the ambiguity flag must not change the decision
            for (bool ambiguous : {false, true}) {
                query::StructuredQueryRepresentation sqr;
                sqr.query_type = type;
                sqr.is_domain_relevant = in_domain;
                sqr.is_ambiguous = ambiguous;
                const auto got = query::route(sqr).pathway;
                require(got == want, std::string(to_label(type)) + " in_domain=" + std::to_string(in_domain) +
                                         " ambiguous=" + std::to_string(ambiguous) + " -> " +
                                         std::string(to_label(got)));
            }
            ++combos;
        }
    }
    require(combos == 12, "expected 12 (type, domain) combinations, saw " + std::to_string(combos));
    return "12/12 (type, domain) combinations";
}

// --- memory ---------------------------------------------------------------

memory::Timestamp at(long long us) { return memory::Timestamp(std::chrono::microseconds(us)); }

std::string memory_bank() {
    testkit::Rng rng(127);
    const std::vector<std::string> hazards = {"flood", "hurricane harvey", "extreme heat", "wildfire"};
    const std::vector<std::string> places = {"houston", "galveston", "austin"};
    const std::size_t cap = 10;
    memory::SessionMemory m(cap);
    long long t = 0;
    std::size_t matched_reads = 0, fallback_reads = 0;
    auto random_tags = [&] {
        EntityTags tags;
        if (testkit::uniform(rng, 0, 1)) tags.disaster_types.push_back(hazards[testkit::uniform(rng, 0, 3)]);
        if (testkit::uniform(rng, 0, 1)) tags.locations.push_back(places[testkit::uniform(rng, 0, 2)]);
        return normalize_tags(std::move(tags));
    };
    for (int op = 0; op < 1000; ++op) {
        if (testkit::uniform(rng, 0, 2) != 0) {
            m.store({"q" + std::to_string(op), "a" + std::to_string(op), random_tags(), at(++t)});
            require(m.size() <= cap, "window exceeded its capacity");
            continue;
        }
        const auto current = random_tags();
        const std::size_t k = testkit::uniform(rng, 1, 5);
        const auto got = m.retrieve_entries(current, k);
        std::vector<memory::MemoryEntry> matching;
        for (const auto& e : m.window()) {
            if (memory::tags_match(e.entity_tags, current)) matching.push_back(e);
        }
        if (!matching.empty()) {
            ++matched_reads;
            for (const auto& e : got) {
                require(memory::tags_match(e.entity_tags, current), "non-matching entry passed the entity stage");
            }
        } else {
            ++fallback_reads;
        }
        const std::vector<memory::MemoryEntry> source =
            matching.empty() ? std::vector<memory::MemoryEntry>(m.window().begin(), m.window().end()) : matching;
        const std::vector<memory::MemoryEntry> want(source.end() - static_cast<std::ptrdiff_t>(std::min(k, source.size())),
                                                   source.end());
        require(got == want, "retrieval at op " + std::to_string(op) + " is not the newest matching entries");
    }
    require(matched_reads > 0 && fallback_reads > 0, "generator never exercised both stages");

    // The rewrite prompt never carries more than three prior turns.
    memory::SessionMemory session;
    for (int i = 0; i < 8; ++i) session.store({"earlier question " + std::to_string(i), "answer", {}, at(i + 1)});
    auto inner = std::make_shared<llm::FixtureReplayClient>();
    inner->add({std::nullopt, llm::PromptKind::Rewrite, {}, "rewritten", false});
    inner->add({std::nullopt, llm::PromptKind::Classify, {}, "TYPE=descriptive;AMBIGUOUS=0;DOMAIN=1", false});
    inner->add({std::nullopt, llm::PromptKind::EntityTags, {}, R"({"disaster_types": [], "locations": []})", false});
    llm::RecordingClient rec(inner);
    query::understand("and then?", session, rec);
    const auto calls = rec.calls();
    require(!calls.empty() && calls[0].kind == llm::PromptKind::Rewrite, "no rewrite call");
    std::size_t turns = 0;
    for (int i = 0; i < 8; ++i) {
        if (calls[0].request.prompt.find("earlier question " + std::to_string(i)) != std::string::npos) ++turns;
    }
    require(turns == 3, "rewrite prompt carried " + std::to_string(turns) + " turns");
    return "1000 ops (" + std::to_string(matched_reads) + " matched, " + std::to_string(fallback_reads) +
           " recency reads); rewrite carries 3 turns";
}

// --- evaluation sweep -----------------------------------------------------

struct Sweep {
    eval::GridResult result;
    std::string json;
};

Sweep synthetic_sweep() {
    const auto suite = eval::make_synthetic_suite(2024, 200, 20);
    const auto corpus = knowledge::ingest_passages(suite.passages);
    retrieval::HashingEmbedder embedder(256);
    retrieval::TokenOverlapScorer scorer;
    const auto indices = retrieval::build_indices(corpus, embedder);
    eval::GoldAwareStubClient model(suite.keys);
    eval::OracleJudge judge;
    const eval::TaskSet tasks{suite.mcq, {}};
    auto result = eval::run_grid({tasks, corpus, indices, {embedder, scorer}, model, judge}, eval::GridSpec{});
    auto json = eval::report_json(result).dump();
    return {std::move(result), std::move(json)};
}

std::string table_shape(const Sweep& sweep) {
    const auto& r = sweep.result;
    require(r.cell_count() == 28, "sweep has " + std::to_string(r.cell_count()) + " cells");
    require(r.baseline.mcq_accuracy.has_value(), "baseline has no accuracy");
    const double base = *r.baseline.mcq_accuracy;
    double lowest = 1.0;
    for (const auto& c : r.cells) {
        require(!c.error, c.label() + " failed: " + c.error.value_or(""));
        require(c.mcq_accuracy.has_value(), c.label() + " has no accuracy");
        require(*c.mcq_accuracy >= base, c.label() + " " + num(*c.mcq_accuracy) + " < baseline " + num(base));
        lowest = std::min(lowest, *c.mcq_accuracy);
    }
    const auto summary = eval::summarize(r);
    return "baseline " + num(base) + ", worst cell " + num(lowest) + ", best " + num(summary.at(0).best);
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::off);

    criterion(1, "evaluation metrics", 1000, metrics);
    criterion(2, "keyword scoring matches the reference formula", 5000, bm25);
    criterion(3, "hybrid score fusion", 5000, fusion);
    criterion(4, "reranking order and determinism", 30000, rerank);
    criterion(5, "context token budgets", 5000, context_budgets);
    criterion(6, "SQL guard", 10000, sql_guard);
    criterion(7, "evacuation-rate question answered from the tables", 1000, evacuation_scenario);
    criterion(8, "flood-prediction question answered from filtered web results", 1000, flood_scenario);
    criterion(9, "routing table", 1000, routing);
    criterion(10, "conversation memory", 5000, memory_bank);

    // The sweep is timed once and reused for the determinism check.
    std::optional<Sweep> first;
    criterion(11, "synthetic 28-cell sweep never falls below the baseline", 120000, [&] {
        first = synthetic_sweep();
        return table_shape(*first);
    });
    criterion(12, "repeated sweeps serialize identically", 240000, [&] {
        require(first.has_value(), "first sweep did not complete");
        const auto second = synthetic_sweep();
        require(first->json == second.json, "reports differ");
        return std::to_string(first->json.size()) + " identical bytes";
    });

    std::printf("summary: %d of 12 criteria failed\n", failures);
    return failures ? 1 : 0;
}
