#include "hazardrag/llm/heuristic_client.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <iterator>
#include <regex>
#include <set>

namespace hazardrag::llm {
namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",     "an",    "the",   "of",    "in",    "on",    "at",    "to",    "for",   "and",
        "or",    "is",    "are",   "was",   "were",  "be",    "been",  "by",    "with",  "from",
        "as",    "that",  "this",  "it",    "its",   "what",  "which", "who",   "how",   "why",
        "when",  "where", "do",    "does",  "did",   "can",   "could", "should", "would", "will",
        "there", "their", "they",  "them",  "these", "those", "about", "into",  "than",  "then",
        "so",    "if",    "not",   "no",    "any",   "all",   "most",  "more",  "such",  "during",
        "after", "before", "over", "under", "between", "i",   "we",    "you",   "my",    "our",
        "me",    "us",    "has",   "have",  "had",   "also",  "other", "some",  "each",  "per",
    };
    return words;
}

std::vector<std::string> content_terms(std::string_view s) {
    std::vector<std::string> out;
    for (auto& t : text::analyze(s)) {
        if (!stopwords().count(t)) out.push_back(std::move(t));
    }
    return out;
}

// Text after the last occurrence of `marker` up to the next line that starts
// with one of `stops`.
std::string section(const std::string& prompt, std::string_view marker,
                    std::initializer_list<std::string_view> stops = {}, bool last = true) {
    const auto at = last ? prompt.rfind(marker) : prompt.find(marker);
    if (at == std::string::npos) return {};
    const std::size_t begin = at + marker.size();
    std::size_t end = prompt.size();
    for (auto stop : stops) {
        const auto s = prompt.find(stop, begin);
        if (s != std::string::npos) end = std::min(end, s);
    }
    return text::trim(std::string_view(prompt).substr(begin, end - begin));
}

std::string first_line(std::string_view s) {
    return text::trim(s.substr(0, s.find('\n')));
}

bool has_any(const std::string& lowered, std::initializer_list<std::string_view> cues) {
    return std::any_of(cues.begin(), cues.end(), [&](std::string_view c) { return text::mentions(lowered, c); });
}

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '\n') {
            if (!text::is_blank(cur)) out.push_back(text::trim(cur));
            cur.clear();
            continue;
        }
        cur += c;
        if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || s[i + 1] == ' ' || s[i + 1] == '\n')) {
            if (!text::is_blank(cur)) out.push_back(text::trim(cur));
            cur.clear();
        }
    }
    if (!text::is_blank(cur)) out.push_back(text::trim(cur));
    return out;
}

double overlap(const std::vector<std::string>& query_terms, std::string_view candidate) {
    if (query_terms.empty()) return 0.0;
    const auto terms = text::analyze(candidate);
    const std::set<std::string> have(terms.begin(), terms.end());
    std::size_t hits = 0;
    for (const auto& q : query_terms) hits += have.count(q);
    return static_cast<double>(hits) / static_cast<double>(query_terms.size());
}

// Best-matching sentences from `evidence`, kept in their original order,
// capped at `max_tokens`.
std::string extract_answer(const std::string& question, const std::string& evidence, std::size_t max_sentences,
                           std::size_t max_tokens) {
    const auto q = content_terms(question);
    const auto sentences = split_sentences(evidence);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        // skip bare citation markers such as "[1] (doc-3)"
        const double s = overlap(q, sentences[i]);
        if (s > 0.0) scored.emplace_back(s, i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (scored.size() > max_sentences) scored.resize(max_sentences);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::string out;
    for (const auto& [_, i] : scored) {
        if (!out.empty()) out += ' ';
        out += sentences[i];
    }
    return text::truncate_tokens(out, max_tokens);
}

std::string strip_markers(std::string s) {
    static const std::regex marker(R"(^\[\d+\]\s*(\([^)]*\)\s*)?)");
    std::string out;
    for (const auto& line : split_sentences(s)) {
        if (!out.empty()) out += '\n';
        out += std::regex_replace(line, marker, "");
    }
    return out;
}

struct SchemaTable {
    std::string name;
    std::vector<std::string> columns;
};

std::vector<SchemaTable> parse_schema(const std::string& prompt) {
    static const std::regex line(R"(^([A-Za-z_][A-Za-z0-9_]*)\(([^()]*)\)\s*$)");
    std::vector<SchemaTable> tables;
    const std::string block = section(prompt, "Schema:", {"Available join keys:"}, false);
    std::size_t start = 0;
    while (start <= block.size()) {
        auto end = block.find('\n', start);
        if (end == std::string::npos) end = block.size();
        const std::string l = text::trim(std::string_view(block).substr(start, end - start));
        std::smatch m;
        if (std::regex_match(l, m, line)) {
            SchemaTable t{m[1].str(), {}};
            std::string cols = m[2].str();
            std::size_t p = 0;
            while (p <= cols.size()) {
                auto c = cols.find(',', p);
                if (c == std::string::npos) c = cols.size();
                auto col = text::trim(std::string_view(cols).substr(p, c - p));
                if (!col.empty()) t.columns.push_back(col);
                p = c + 1;
            }
            tables.push_back(std::move(t));
        }
        start = end + 1;
    }
    return tables;
}

std::vector<std::pair<std::string, std::string>> parse_mappings(const std::string& prompt) {
    static const std::regex line("\"([^\"]+)\"\\s*->\\s*(.+)");
    std::vector<std::pair<std::string, std::string>> out;
    const std::string block = section(prompt, "Domain mappings:", {"\nQuestion:"}, false);
    auto begin = std::sregex_iterator(block.begin(), block.end(), line);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        out.emplace_back((*it)[1].str(), text::trim((*it)[2].str()));
    }
    return out;
}

std::vector<std::string> underscore_parts(std::string_view name) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text::to_lower(name)) {
        if (c == '_') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

// Every meaningful word of the column name occurs in the question.
bool column_mentioned(const std::string& question_lower, const std::string& column) {
    bool any = false;
    for (const auto& p : underscore_parts(column)) {
        if (p == "adj" || p == "id" || p == "data") continue;
        if (question_lower.find(p) == std::string::npos) return false;
        any = true;
    }
    return any;
}

}  // namespace

HeuristicModelClient::HeuristicModelClient()
    : lexicon_{
          {"houston", "harris county", "fort bend county", "galveston", "beaumont", "texas", "katy",
           "pasadena", "baytown", "sugar land", "conroe", "corpus christi", "florida", "louisiana",
           "new orleans", "miami", "tampa"},
          {"hurricane harvey", "hurricane beryl", "harvey", "beryl", "hurricane", "tropical storm", "flood",
           "flooding", "storm surge", "power outage", "wildfire", "heat wave", "extreme heat", "drought",
           "tornado", "winter storm", "evacuation"},
      } {}

std::string HeuristicModelClient::generate(const GenerationRequest& request) {
    const auto kind = detect_prompt_kind(request.prompt);
    if (!kind) throw Error(ErrorCode::ClientFailure, "heuristic model: unrecognized prompt");
    switch (*kind) {
        case PromptKind::Rewrite: return rewrite(request.prompt);
        case PromptKind::Classify: return classify(request.prompt);
        case PromptKind::EntityTags: return tag(request.prompt);
        case PromptKind::TextToSql: return text_to_sql(request.prompt);
        case PromptKind::Answer: return text::truncate_tokens(answer(request.prompt),
                                                              static_cast<std::size_t>(request.max_output_tokens));
        case PromptKind::McqAnswer: return mcq(request.prompt);
        case PromptKind::OpenAnswer: {
            const auto q = first_line(section(request.prompt, "Question:"));
            const auto ctx = strip_markers(section(request.prompt, "Context:", {"\nQuestion:"}));
            auto out = extract_answer(q, ctx, 3, static_cast<std::size_t>(request.max_output_tokens));
            return out.empty() ? "No answer could be derived from the context." : out;
        }
        case PromptKind::KeypointJudge: return judge(request.prompt);
    }
    throw Error(ErrorCode::ClientFailure, "heuristic model: unsupported prompt");
}

std::string HeuristicModelClient::rewrite(const std::string& prompt) const {
    const std::string latest = first_line(section(prompt, "Latest request:"));
    const std::string history = section(prompt, "Conversation history (oldest first):", {"\nLatest request:"});
    const std::string lowered = text::to_lower(latest);

    // most recent mention wins, so scan from the end of the history; ranking
    // by end offset lets "hurricane harvey" beat the "harvey" inside it
    auto last_mention = [&history](const std::vector<std::string>& names) -> std::string {
        std::string best;
        std::size_t best_end = 0;
        const std::string h = text::to_lower(history);
        for (const auto& n : names) {
            const auto pos = h.rfind(n);
            if (pos == std::string::npos || !text::mentions(h, n)) continue;
            const auto end = pos + n.size();
            if (best.empty() || end > best_end || (end == best_end && n.size() > best.size())) {
                best = n;
                best_end = end;
            }
        }
        return best;
    };
    const bool has_location = std::any_of(lexicon_.locations.begin(), lexicon_.locations.end(),
                                          [&](const std::string& l) { return text::mentions(lowered, l); });
    const bool has_event = std::any_of(lexicon_.disasters.begin(), lexicon_.disasters.end(),
                                       [&](const std::string& d) { return text::mentions(lowered, d); });
    std::string out = latest;
    const std::string place = has_location ? "" : last_mention(lexicon_.locations);
    // A named storm is a better scope carrier than a hazard word that happens
    // to appear later (often inside an answer).
    std::vector<std::string> named;
    std::copy_if(lexicon_.disasters.begin(), lexicon_.disasters.end(), std::back_inserter(named),
                 [](const std::string& d) { return d.find("harvey") != std::string::npos || d.find("beryl") != std::string::npos; });
    std::string event = has_event ? "" : last_mention(named);
    if (!has_event && event.empty()) event = last_mention(lexicon_.disasters);

    auto replace_word = [](std::string& s, const std::string& word, const std::string& with) {
        const std::regex re("\\b" + word + "\\b", std::regex::icase);
        const std::string replaced = std::regex_replace(s, re, with, std::regex_constants::format_first_only);
        const bool changed = replaced != s;
        s = replaced;
        return changed;
    };
    bool used_place = false;
    bool used_event = false;
    if (!place.empty()) {
        for (const char* w : {"that area", "this area", "the area", "there"}) {
            if (replace_word(out, w, w == std::string("there") ? "in " + place : place)) {
                used_place = true;
                break;
            }
        }
    }
    if (!event.empty()) {
        for (const char* w : {"that storm", "this storm", "the storm", "that event", "this event", "the event",
                              "that hurricane", "the hurricane", "it"}) {
            if (replace_word(out, w, event)) {
                used_event = true;
                break;
            }
        }
    }
    // Elliptical follow-ups ("what about rainfall?") inherit the prior scope.
    const bool elliptical = has_any(lowered, {"what about", "how about", "and", "also", "same"});
    if (elliptical) {
        if (!event.empty() && !used_event) out += " (" + event + ")";
        if (!place.empty() && !used_place) out += " in " + place;
    }
    return out;
}

std::string HeuristicModelClient::classify(const std::string& prompt) const {
    const std::string request = text::to_lower(first_line(section(prompt, "Request:")));
    std::string type = "other";
    if (has_any(request, {"how many", "number of", "highest", "largest", "lowest", "smallest", "maximum",
                          "minimum", "average", "mean", "total", "rank", "ranked", "top", "count", "percentage",
                          "percent", "rate", "rates", "which zip", "zip codes", "most affected"})) {
        type = "quantitative";
    } else if (has_any(request, {"why", "explain", "cause", "causes", "caused", "mechanism", "how does",
                                 "how do", "how did", "effect", "effects", "impact of"})) {
        type = "explanatory";
    } else if (has_any(request, {"what is", "what are", "describe", "definition", "define", "how to",
                                 "how should", "how can", "steps", "guidance", "recommend", "recommended",
                                 "prepare", "checklist", "what should", "list"})) {
        type = "descriptive";
    } else if (has_any(request, {"where"})) {
        type = "locational";
    } else if (has_any(request, {"what about", "how about", "and there", "same"})) {
        type = "contextual";
    }
    const bool out_of_scope = has_any(request, {"predict", "prediction", "predictions", "predicting", "forecast",
                                                "forecasting", "projection", "future", "latest news", "news",
                                                "state of the art", "recent advances", "recent research",
                                                "machine learning", "deep learning", "earthquake", "tsunami",
                                                "volcano"});
    const bool ambiguous = text::count_tokens(request) < 3;
    return "TYPE=" + type + ";AMBIGUOUS=" + (ambiguous ? "1" : "0") + ";DOMAIN=" + (out_of_scope ? "0" : "1");
}

std::string HeuristicModelClient::tag(const std::string& prompt) const {
    const std::string request = first_line(section(prompt, "Request:"));
    nlohmann::json out{{"disaster_types", nlohmann::json::array()}, {"locations", nlohmann::json::array()}};
    auto collect = [&request](const std::vector<std::string>& names, nlohmann::json& arr) {
        std::vector<std::string> found;
        for (const auto& n : names) {
            if (!text::mentions(request, n)) continue;
            // "hurricane harvey" subsumes "harvey" and "hurricane"
            const bool covered = std::any_of(found.begin(), found.end(), [&n](const std::string& f) {
                return f.size() > n.size() && text::mentions(f, n);
            });
            if (!covered) found.push_back(n);
        }
        for (auto& f : found) arr.push_back(f);
    };
    collect(lexicon_.disasters, out["disaster_types"]);
    collect(lexicon_.locations, out["locations"]);
    static const std::regex zip(R"(\b7\d{4}\b)");
    for (auto it = std::sregex_iterator(request.begin(), request.end(), zip); it != std::sregex_iterator(); ++it) {
        out["locations"].push_back(it->str());
    }
    return out.dump();
}

std::string HeuristicModelClient::text_to_sql(const std::string& prompt) const {
    const std::string question = first_line(section(prompt, "Question:"));
    const std::string q = text::to_lower(question);
    const auto tables = parse_schema(prompt);
    const auto mappings = parse_mappings(prompt);
    if (tables.empty()) return "-- no schema available";

    std::string func;
    std::string column;
    for (const auto& [phrase, op] : mappings) {
        if (q.find(text::to_lower(phrase)) == std::string::npos) continue;
        static const std::regex agg(R"(^(MAX|MIN|SUM|AVG|COUNT)\(([A-Za-z_][A-Za-z0-9_]*)\))", std::regex::icase);
        std::smatch m;
        if (std::regex_search(op, m, agg)) {
            func = text::to_upper(m[1].str());
            column = m[2].str();
            break;
        }
    }
    if (column.empty()) {
        for (const auto& t : tables) {
            for (const auto& c : t.columns) {
                if (column.empty() && column_mentioned(q, c) && c != "zip_code") column = c;
            }
        }
        if (has_any(q, {"average", "mean"})) func = "AVG";
        else if (has_any(q, {"total", "sum", "overall"})) func = "SUM";
        else if (has_any(q, {"how many", "number of", "count"})) func = "COUNT";
        else if (has_any(q, {"lowest", "smallest", "minimum", "least"})) func = "MIN";
        else func = "MAX";
    }
    if (column.empty()) return "-- the request does not match any column in the schema";

    // Among tables holding the column, prefer one whose name shares a word
    // with the question (e.g. the event name).
    const SchemaTable* table = nullptr;
    int best = -1;
    for (const auto& t : tables) {
        if (std::none_of(t.columns.begin(), t.columns.end(),
                         [&](const std::string& c) { return text::to_lower(c) == text::to_lower(column); })) {
            continue;
        }
        int score = 0;
        for (const auto& w : underscore_parts(t.name)) score += text::mentions(q, w) ? 1 : 0;
        if (score > best) {
            best = score;
            table = &t;
        }
    }
    if (!table) return "-- column " + column + " is not in the schema";

    std::string group;
    const std::vector<std::pair<std::string, std::vector<std::string_view>>> geo = {
        {"zip_code", {"zip", "zip code", "zip codes", "zipcode"}},
        {"GEOID_TRACT_20", {"tract", "tracts", "census tract"}},
        {"CBG_ID", {"block group", "block groups"}},
    };
    for (const auto& [col, cues] : geo) {
        const bool present = std::any_of(table->columns.begin(), table->columns.end(),
                                         [&](const std::string& c) { return text::to_lower(c) == text::to_lower(col); });
        if (!present) continue;
        const bool cued = std::any_of(cues.begin(), cues.end(), [&](std::string_view c) { return text::mentions(q, c); });
        if (cued || (group.empty() && has_any(q, {"which", "where", "area", "areas", "rank", "ranked", "by"}))) {
            group = col;
            if (cued) break;
        }
    }

    const std::string agg = func + "(" + column + ")";
    std::string sql = "SELECT ";
    if (!group.empty()) sql += group + ", ";
    sql += agg + " FROM " + table->name;
    if (!group.empty()) sql += " GROUP BY " + group;
    if (!group.empty()) {
        const bool ascending = has_any(q, {"lowest", "smallest", "least", "minimum"});
        sql += " ORDER BY " + agg + (ascending ? " ASC" : " DESC");
        static const std::regex top(R"(\btop\s+(\d+))");
        std::smatch m;
        if (std::regex_search(q, m, top)) sql += " LIMIT " + m[1].str();
    }
    return sql + ";";
}

std::string HeuristicModelClient::answer(const std::string& prompt) const {
    const std::string question = first_line(section(prompt, "Request:"));
    const std::string evidence = section(prompt, "Evidence:", {"\n\nEarlier turns in this conversation:"}, false);
    if (evidence.empty() || evidence.find("(no evidence was found)") != std::string::npos) {
        return "I could not find evidence that answers this request in the available sources.";
    }
    if (evidence.rfind("SQL:", 0) == 0) {
        std::vector<std::string> rows;
        for (const auto& line : split_sentences(evidence)) {
            if (line.rfind("SQL:", 0) == 0 || line.rfind("Rows returned:", 0) == 0 || line.rfind("(first", 0) == 0) {
                continue;
            }
            rows.push_back(line);
        }
        if (rows.empty()) return "The database query returned no matching records.";
        std::string out = "According to the database records, the first result is " + rows[0] + ".";
        for (std::size_t i = 1; i < rows.size() && i < 5; ++i) out += " Next: " + rows[i] + ".";
        return out;
    }
    const bool web = std::regex_search(evidence, std::regex(R"(^\[1\] https?://)"));
    std::string body;
    if (web) {
        std::string plain;
        for (const auto& line : split_sentences(evidence)) {
            if (std::regex_search(line, std::regex(R"(^\[\d+\] https?://)"))) continue;
            plain += line + "\n";
        }
        body = extract_answer(question, plain, 3, 1000);
        return "Based on web search results, which may be incomplete or outside the curated knowledge base: " +
               (body.empty() ? std::string("the snippets found do not directly answer the request.") : body);
    }
    body = extract_answer(question, strip_markers(evidence), 3, 1000);
    return body.empty() ? "The retrieved documents do not directly answer this request." : body;
}

std::string HeuristicModelClient::mcq(const std::string& prompt) const {
    const std::string context = strip_markers(section(prompt, "Context:", {"\nQuestion:"}));
    const std::string question = section(prompt, "Question:", {"\nA. "});
    static const std::regex option(R"((?:^|\n)([A-D])\.\s*([^\n]*))");
    const std::string options_block = section(prompt, "Question:", {"\nAnswer:"});
    std::vector<std::pair<char, std::string>> options;
    for (auto it = std::sregex_iterator(options_block.begin(), options_block.end(), option);
         it != std::sregex_iterator(); ++it) {
        options.emplace_back((*it)[1].str()[0], (*it)[2].str());
    }
    if (options.empty()) return "A";
    // Score each option by how much of it the context supports, restricted
    // to sentences relevant to the question.
    const auto q_terms = content_terms(question);
    const auto sentences = split_sentences(context);
    char best = options.front().first;
    double best_score = -1.0;
    for (const auto& [letter, text_] : options) {
        const auto o_terms = content_terms(text_);
        double score = 0.0;
        for (const auto& s : sentences) {
            const double rel = overlap(q_terms, s);
            const double sup = overlap(o_terms, s);
            score = std::max(score, sup * (0.5 + rel));
        }
        if (score > best_score) {
            best_score = score;
            best = letter;
        }
    }
    return std::string(1, best);
}

std::string HeuristicModelClient::judge(const std::string& prompt) const {
    const std::string keypoint = first_line(section(prompt, "Keypoint:", {"\nResponse:"}, false));
    const std::string response = section(prompt, "Response:", {"\nVerdict"}, false);
    if (text::mentions(response, keypoint)) return "YES";
    const auto terms = content_terms(keypoint);
    return overlap(terms, response) >= 0.6 ? "YES" : "NO";
}

}  // namespace hazardrag::llm
