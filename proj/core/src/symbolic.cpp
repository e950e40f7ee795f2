#include "azlab/symbolic.hpp"

#include <cmath>
#include <numeric>

#include "azlab/error.hpp"

namespace azlab {

SymbolCode::SymbolCode() : per_{0} {}

SymbolCode::SymbolCode(std::vector<std::uint8_t> preperiod, std::vector<std::uint8_t> period)
    : pre_(std::move(preperiod)), per_(std::move(period)) {
    if (per_.empty()) per_ = {0};
    for (auto d : pre_)
        if (d > 1) throw_config("symbol digits must be 0 or 1");
    for (auto d : per_)
        if (d > 1) throw_config("symbol digits must be 0 or 1");
    canonicalize();
}

SymbolCode SymbolCode::finite(std::vector<std::uint8_t> word) { return SymbolCode(std::move(word), {0}); }

SymbolCode SymbolCode::parse(const std::string& text) {
    std::vector<std::uint8_t> pre, per;
    bool in_period = false, closed = false;
    for (char ch : text) {
        if (ch == '(' && !in_period && !closed) {
            in_period = true;
        } else if (ch == ')' && in_period) {
            in_period = false;
            closed = true;
        } else if ((ch == '0' || ch == '1') && !closed) {
            (in_period ? per : pre).push_back(static_cast<std::uint8_t>(ch - '0'));
        } else {
            throw_config("malformed symbol code '" + text + "'");
        }
    }
    if (in_period || (closed && per.empty())) throw_config("malformed symbol code '" + text + "'");
    return SymbolCode(std::move(pre), closed ? std::move(per) : std::vector<std::uint8_t>{0});
}

void SymbolCode::canonicalize() {
    // Minimal period: smallest divisor p of |per| with per periodic under p.
    const std::size_t n = per_.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = per_[i] == per_[i - p];
        if (ok) {
            per_.resize(p);
            break;
        }
    }
    // Absorb trailing preperiod digits into a rotated period.
    while (!pre_.empty() && pre_.back() == per_.back()) {
        pre_.pop_back();
        std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
    }
}

int SymbolCode::digit(std::size_t n) const {
    if (n == 0) throw_config("symbol positions are 1-based");
    if (n <= pre_.size()) return pre_[n - 1];
    return per_[(n - 1 - pre_.size()) % per_.size()];
}

std::string SymbolCode::str() const {
    std::string out;
    for (auto d : pre_) out.push_back(static_cast<char>('0' + d));
    out.push_back('(');
    for (auto d : per_) out.push_back(static_cast<char>('0' + d));
    out.push_back(')');
    return out;
}

double shift_metric(const SymbolCode& s, const SymbolCode& t) {
    if (s == t) return 0.0;
    // Beyond `head` both sequences are jointly periodic with period `joint`.
    const std::size_t head = std::max(s.preperiod().size(), t.preperiod().size());
    const std::size_t ps = s.period().size(), pt = t.period().size();
    const std::size_t joint = std::lcm(ps, pt);
    if (joint <= 4096) {
        double head_sum = 0.0;
        for (std::size_t n = 1; n <= head; ++n)
            if (s.digit(n) != t.digit(n)) head_sum += std::ldexp(1.0, -static_cast<int>(n));
        // Sum over one joint period, then the geometric series 1 / (1 - 2^-joint).
        double block = 0.0;
        for (std::size_t j = 1; j <= joint; ++j)
            if (s.digit(head + j) != t.digit(head + j)) block += std::ldexp(1.0, -static_cast<int>(j));
        const double tail = std::ldexp(block, -static_cast<int>(std::min<std::size_t>(head, 1100))) /
                            (1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(joint, 1100))));
        return head_sum + tail;
    }
    // Huge joint period: terms past 64 digits beyond the first difference fall
    // below double resolution of the partial sum.
    double sum = 0.0;
    std::size_t first = 0;
    for (std::size_t n = 1;; ++n) {
        if (s.digit(n) != t.digit(n)) {
            sum += std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1100)));
            if (!first) first = n;
        }
        if (first && n >= first + 64) break;
        if (n > 1100) break;
    }
    return sum;
}

SymbolCode shift_map(const SymbolCode& s) {
    if (!s.preperiod().empty())
        return SymbolCode({s.preperiod().begin() + 1, s.preperiod().end()}, s.period());
    std::vector<std::uint8_t> per = s.period();
    std::rotate(per.begin(), per.begin() + 1, per.end());
    return SymbolCode({}, std::move(per));
}

SymbolCode shift_map(const SymbolCode& s, std::size_t k) {
    SymbolCode out = s;
    const std::size_t drop = std::min(k, s.preperiod().size());
    if (drop) out = SymbolCode({s.preperiod().begin() + drop, s.preperiod().end()}, s.period());
    for (std::size_t i = 0; i < (k - drop) % out.period().size(); ++i) out = shift_map(out);
    return out;
}

SymbolCode periodic_code(const std::vector<std::uint8_t>& word) {
    if (word.empty()) throw_config("periodic_code needs a nonempty word");
    return SymbolCode({}, word);
}

std::vector<std::uint8_t> prefix(const SymbolCode& s, std::size_t length) {
    std::vector<std::uint8_t> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = static_cast<std::uint8_t>(s.digit(i + 1));
    return out;
}

SymbolCode concat(const std::vector<std::uint8_t>& word, const SymbolCode& s) {
    std::vector<std::uint8_t> pre = word;
    pre.insert(pre.end(), s.preperiod().begin(), s.preperiod().end());
    return SymbolCode(std::move(pre), s.period());
}

}  // namespace azlab
