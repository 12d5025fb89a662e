#include "hazardrag/eval/tasks.hpp"

#include "hazardrag/error.hpp"
#include "hazardrag/llm/prompt_kind.hpp"
#include "hazardrag/text.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hazardrag::eval {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_array(std::string_view text, const char* what) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, std::string(what) + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::MalformedRecord, std::string(what) + ": expected a JSON array");
    return doc;
}

std::string required_string(const json& obj, const char* key, std::size_t index) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_string() || text::is_blank(it->get<std::string>())) {
        throw Error(ErrorCode::MalformedRecord, "item " + std::to_string(index) + ": missing " + key);
    }
    return it->get<std::string>();
}

void check_unique(std::set<std::string>& seen, const std::string& id) {
    if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateId, "duplicate item id " + id);
}

}  // namespace

std::vector<McqItem> parse_mcq_items(std::string_view json_text) {
    const auto doc = parse_array(json_text, "MCQ items");
    std::vector<McqItem> items;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        if (!obj.is_object()) throw Error(ErrorCode::MalformedRecord, "item " + std::to_string(i) + " is not an object");
        McqItem item;
        item.id = required_string(obj, "id", i);
        item.question = required_string(obj, "question", i);
        const auto options = obj.find("options");
        if (options == obj.end() || !options->is_object()) {
            throw Error(ErrorCode::MalformedRecord, item.id + ": options must be an object keyed A-D");
        }
        for (std::size_t k = 0; k < kChoiceLetters.size(); ++k) {
            item.options[k] = required_string(*options, std::string(1, kChoiceLetters[k]).c_str(), i);
        }
        const auto gold = text::to_upper(text::trim(required_string(obj, "gold", i)));
        if (gold.size() != 1 || gold[0] < 'A' || gold[0] > 'D') {
            throw Error(ErrorCode::MalformedRecord, item.id + ": gold must be one of A-D");
        }
        item.gold = gold[0];
        check_unique(seen, item.id);
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<OeItem> parse_oe_items(std::string_view json_text) {
    const auto doc = parse_array(json_text, "OE items");
    std::vector<OeItem> items;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        if (!obj.is_object()) throw Error(ErrorCode::MalformedRecord, "item " + std::to_string(i) + " is not an object");
        OeItem item;
        item.id = required_string(obj, "id", i);
        item.question = required_string(obj, "question", i);
        const auto kps = obj.find("keypoints");
        if (kps == obj.end() || !kps->is_array()) {
            throw Error(ErrorCode::MalformedRecord, item.id + ": keypoints must be an array");
        }
        for (const auto& k : *kps) {
            if (!k.is_string() || text::is_blank(k.get<std::string>())) {
                throw Error(ErrorCode::MalformedRecord, item.id + ": keypoints must be non-empty strings");
            }
            item.keypoints.push_back(k.get<std::string>());
        }
        if (item.keypoints.empty()) throw Error(ErrorCode::EmptyKeypoints, item.id + " has no keypoints");
        const auto difficulty = parse_difficulty(required_string(obj, "difficulty", i));
        if (!difficulty) throw Error(ErrorCode::MalformedRecord, item.id + ": unknown difficulty");
        item.difficulty = *difficulty;
        check_unique(seen, item.id);
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<McqItem> load_mcq_items(const std::filesystem::path& path) {
    return parse_mcq_items(read_file(path));
}

std::vector<OeItem> load_oe_items(const std::filesystem::path& path) {
    return parse_oe_items(read_file(path));
}

std::optional<char> extract_choice(std::string_view reply) {
    for (std::size_t i = 0; i < reply.size(); ++i) {
        const char c = reply[i];
        if (c < 'A' || c > 'D') continue;
        const bool left = i == 0 || !std::isalnum(static_cast<unsigned char>(reply[i - 1]));
        const bool right = i + 1 == reply.size() || !std::isalnum(static_cast<unsigned char>(reply[i + 1]));
        if (left && right) return c;
    }
    return std::nullopt;
}

std::string render_eval_context(std::span<const ContextUnit> units) {
    if (units.empty()) return "(none)";
    std::string out;
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i) out += '\n';
        out += "[" + std::to_string(i + 1) + "] " + units[i].text;
    }
    return out;
}

std::string build_mcq_prompt(const McqItem& item, std::span<const ContextUnit> context) {
    std::string p(llm::kMcqTask);
    p += "\nUse the context when it is relevant. Reply with the letter of the single best option.\n\nContext:\n";
    p += render_eval_context(context);
    p += "\n\nQuestion: " + item.question;
    for (std::size_t k = 0; k < kChoiceLetters.size(); ++k) {
        p += "\n";
        p += kChoiceLetters[k];
        p += ". " + item.options[k];
    }
    p += "\n\nAnswer:";
    return p;
}

std::string build_oe_prompt(const OeItem& item, std::span<const ContextUnit> context) {
    std::string p(llm::kOpenTask);
    p += "\nUse the context when it is relevant. Answer in prose.\n\nContext:\n";
    p += render_eval_context(context);
    p += "\n\nQuestion: " + item.question + "\n\nAnswer:";
    return p;
}

}  // namespace hazardrag::eval
