#pragma once

#include "tsilab/functional.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsilab {

/// Injective coding of strictly increasing finite sequences of norming
/// functionals into even naturals, with the first-use assignment rule: the
/// smallest unused even number exceeding both every weight class appearing in
/// the sequence and every previously assigned code. Persistable; identical
/// assignment histories reproduce identical codes.
class Codebook {
public:
    struct Entry {
        std::vector<Functional> seq;
        std::string key;
        std::int64_t code;
    };

    /// Key: canonical serializations joined by '|'.
    static std::string key_of(const std::vector<Functional>& seq);

    /// Registers (or looks up) the sequence; validates strict support
    /// increase. Throws input_error on a malformed sequence.
    std::int64_t assign(const std::vector<Functional>& seq);

    /// Lookup without assignment.
    std::optional<std::int64_t> code_of(const std::vector<Functional>& seq) const;
    std::optional<std::int64_t> code_of_key(const std::string& key) const;

    const std::vector<Entry>& entries() const { return entries_; }
    std::int64_t last_code() const { return last_code_; }

    std::string to_json() const;
    static Codebook from_json(const std::string& text); // integrity-checked

    void save(const std::string& path) const;
    static Codebook load(const std::string& path); // empty book if absent

private:
    std::vector<Entry> entries_;
    std::map<std::string, std::int64_t> by_key_;
    std::int64_t last_code_ = 0;
};

} // namespace tsilab
