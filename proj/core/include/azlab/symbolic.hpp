#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace azlab {

/// Eventually periodic binary sequence s(1) s(2) ...: `preperiod` digits then
/// `period` repeated forever. Always kept canonical (minimal period, then
/// minimal preperiod). A finite word is the word followed by zeros.
class SymbolCode {
public:
    SymbolCode();
    SymbolCode(std::vector<std::uint8_t> preperiod, std::vector<std::uint8_t> period);

    /// Parses "0110" (zeros after) or "01(10)" (bracketed repeating part).
    static SymbolCode parse(const std::string& text);
    static SymbolCode finite(std::vector<std::uint8_t> word);

    const std::vector<std::uint8_t>& preperiod() const noexcept { return pre_; }
    const std::vector<std::uint8_t>& period() const noexcept { return per_; }

    /// n-th digit, 1-based.
    int digit(std::size_t n) const;
    std::string str() const;

    bool operator==(const SymbolCode& other) const = default;

private:
    void canonicalize();

    std::vector<std::uint8_t> pre_;
    std::vector<std::uint8_t> per_;
};

/// d(s, t) = sum_{n>=1} 2^-n |s(n) - t(n)|, evaluated exactly in closed form
/// when the joint period is manageable.
double shift_metric(const SymbolCode& s, const SymbolCode& t);

/// Drops the first digit.
SymbolCode shift_map(const SymbolCode& s);
SymbolCode shift_map(const SymbolCode& s, std::size_t k);

/// The sequence repeating `word` forever. Throws on an empty word.
SymbolCode periodic_code(const std::vector<std::uint8_t>& word);

/// First L digits.
std::vector<std::uint8_t> prefix(const SymbolCode& s, std::size_t length);

/// word followed by s.
SymbolCode concat(const std::vector<std::uint8_t>& word, const SymbolCode& s);

}  // namespace azlab
