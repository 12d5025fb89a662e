#include "hazardrag/eval/synthetic.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/llm/prompt_kind.hpp"
#include "hazardrag/text.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>
#include <set>

namespace hazardrag::eval {
namespace {

constexpr std::array kSyllables = {"var", "nel", "tor", "ka", "mi", "zen", "lo", "bra", "quin", "dal",
                                   "sel", "mor", "pet", "ri", "gan", "vo", "lus", "ther", "ond", "cas"};
constexpr std::array kHazards = {"flood",   "hurricane", "wildfire",     "heat wave",
                                 "drought", "tornado",   "winter storm", "storm surge"};
constexpr std::array kAdjectives = {"mobile",   "elevated", "temporary", "solar",
                                    "community", "regional", "floating", "reinforced"};
constexpr std::array kNouns = {"generators", "shelters", "pumps",  "levees",
                               "cooling centers", "radio relays", "water tanks", "clinics"};
constexpr std::array kFiller = {"planners", "reviewed", "budget", "drainage", "culverts", "warning",
                                "sirens",   "volunteers", "inventory", "bridges", "schools", "roads",
                                "hospital", "capacity", "training", "exercise", "agency", "permits"};

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    template <typename Array>
    std::string pick(const Array& a) { return a[below(a.size())]; }
    std::uint64_t raw() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

std::string make_name(Draw& d) {
    std::string name;
    const std::size_t parts = 2 + d.below(2);
    for (std::size_t i = 0; i < parts; ++i) name += d.pick(kSyllables);
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    return name;
}

}  // namespace

SyntheticSuite make_synthetic_suite(std::uint64_t seed, std::size_t passage_count, std::size_t item_count) {
    if (item_count == 0 || passage_count < item_count) {
        throw Error(ErrorCode::InvalidConfig, "synthetic suite needs at least one passage per item");
    }
    Draw d(seed);
    SyntheticSuite suite;

    std::set<std::string> names;
    auto fresh_name = [&] {
        for (;;) {
            auto n = make_name(d);
            if (names.insert(n).second) return n;
        }
    };
    // Draws are sequenced explicitly; operand order of + is unspecified.
    auto answer_phrase = [&] {
        std::string adjective = d.pick(kAdjectives);
        std::string noun = d.pick(kNouns);
        return adjective + " " + noun;
    };

    std::vector<std::string> texts;
    for (std::size_t i = 0; i < item_count; ++i) {
        const std::string county = fresh_name() + " County";
        const std::string hazard = d.pick(kHazards);
        const std::string marker = "marker-" + text::hex64(d.raw()).substr(0, 8);

        std::vector<std::string> options;
        while (options.size() < 4) {
            auto a = answer_phrase();
            if (std::find(options.begin(), options.end(), a) == options.end()) options.push_back(a);
        }
        const std::size_t gold = d.below(4);  // options[0] is the true answer; move it into place
        std::swap(options[0], options[gold]);
        const std::string& answer = options[gold];

        texts.push_back("Field report " + marker + ". During the " + hazard + " in " + county +
                        ", responders relied on " + answer + " to keep residents safe. Officials in " +
                        county + " credited the " + answer + " with reducing losses.");

        McqItem item;
        item.id = "syn-q" + std::to_string(i + 1);
        item.question = "During the " + hazard + " in " + county + ", what did responders rely on to keep residents safe?";
        for (std::size_t k = 0; k < 4; ++k) item.options[k] = options[k];
        item.gold = kChoiceLetters[gold];
        suite.keys[item.question] = SyntheticItemKey{marker, item.gold, i % 4 == 0};
        suite.mcq.push_back(std::move(item));
    }
    while (texts.size() < passage_count) {
        const std::string county = fresh_name() + " County";
        const std::string reviewed = answer_phrase();
        const std::string hazard = d.pick(kHazards);
        std::string t = "Planners in " + county + " reviewed " + reviewed + " after the " + hazard + ".";
        const std::size_t extra = 6 + d.below(10);
        for (std::size_t w = 0; w < extra; ++w) t += " " + d.pick(kFiller);
        t += ".";
        texts.push_back(std::move(t));
    }
    for (std::size_t i = texts.size(); i > 1; --i) std::swap(texts[i - 1], texts[d.below(i)]);

    for (std::size_t i = 0; i < texts.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "syn-%04zu", i + 1);
        knowledge::RawPassage p;
        p.id = id;
        p.source_id = id;
        p.text = std::move(texts[i]);
        suite.passages.push_back(std::move(p));
    }
    return suite;
}

std::string GoldAwareStubClient::generate(const llm::GenerationRequest& request) {
    const auto& prompt = request.prompt;
    if (llm::detect_prompt_kind(prompt) != llm::PromptKind::McqAnswer) {
        throw Error(ErrorCode::ClientFailure, "synthetic stub only answers multiple-choice prompts");
    }
    const auto q_at = prompt.rfind("\n\nQuestion: ");
    const auto opts = prompt.find("\nA. ", q_at == std::string::npos ? 0 : q_at);
    if (q_at == std::string::npos || opts == std::string::npos) return "";
    const auto question = prompt.substr(q_at + 12, opts - q_at - 12);
    const auto it = keys_.find(question);
    if (it == keys_.end()) return "";
    const auto context = std::string_view(prompt).substr(0, q_at);
    const auto& key = it->second;
    if (key.known || context.find(key.marker) != std::string_view::npos) return std::string(1, key.gold);
    return std::string(1, static_cast<char>('A' + (key.gold - 'A' + 1) % 4));
}

}  // namespace hazardrag::eval
