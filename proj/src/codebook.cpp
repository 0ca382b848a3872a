#include "tsilab/codebook.hpp"

#include "tsilab/errors.hpp"

#include "json.hpp"

#include <fstream>

namespace tsilab {

std::string Codebook::key_of(const std::vector<Functional>& seq) {
    std::string key;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) key += "|";
        key += seq[i].serialize();
    }
    return key;
}

std::int64_t Codebook::assign(const std::vector<Functional>& seq) {
    if (seq.empty()) throw input_error("codebook: empty sequence");
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i].min_support() <= seq[i - 1].max_support())
            throw input_error("codebook: sequence is not strictly support-increasing at position " +
                              std::to_string(i));
    std::string key = key_of(seq);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    std::int64_t max_weight = 0;
    for (const auto& f : seq) max_weight = std::max<std::int64_t>(max_weight, f.is_leaf() ? 0 : f.weight);
    std::int64_t code = std::max(max_weight, last_code_) + 1;
    if (code % 2 != 0) ++code; // smallest even exceeding both
    entries_.push_back({seq, key, code});
    by_key_[key] = code;
    last_code_ = code;
    return code;
}

std::optional<std::int64_t> Codebook::code_of(const std::vector<Functional>& seq) const {
    return code_of_key(key_of(seq));
}

std::optional<std::int64_t> Codebook::code_of_key(const std::string& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

std::string Codebook::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "tsilab-codebook-v1";
    j["last_code"] = last_code_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries_) arr.push_back({{"key", e.key}, {"code", e.code}});
    j["entries"] = std::move(arr);
    return j.dump(2);
}

Codebook Codebook::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw input_error(std::string("codebook: bad JSON: ") + e.what());
    }
    Codebook cb;
    if (j.value("format", "") != "tsilab-codebook-v1") throw integrity_error("codebook: unknown format");
    std::int64_t prev = 0;
    for (const auto& e : j.at("entries")) {
        Entry entry;
        entry.key = e.at("key").get<std::string>();
        entry.code = e.at("code").get<std::int64_t>();
        if (entry.code % 2 != 0 || entry.code <= prev)
            throw integrity_error("codebook: codes must be even and strictly increasing");
        prev = entry.code;
        std::string piece;
        for (char c : entry.key + "|") {
            if (c == '|') {
                entry.seq.push_back(Functional::deserialize(piece));
                piece.clear();
            } else piece += c;
        }
        if (cb.by_key_.count(entry.key)) throw integrity_error("codebook: duplicate key");
        cb.by_key_[entry.key] = entry.code;
        cb.entries_.push_back(std::move(entry));
    }
    cb.last_code_ = j.value("last_code", prev);
    if (cb.last_code_ != prev) throw integrity_error("codebook: last_code does not match entries");
    return cb;
}

void Codebook::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw input_error("codebook: cannot write " + path);
    out << to_json() << "\n";
}

Codebook Codebook::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Codebook{};
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

} // namespace tsilab
