#include "renyi_ldp/shift_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace {

void validate_digits(const std::vector<Digit>& digits) {
    if (digits.empty()) throw DomainError("word must be non-empty");
    for (Digit p : digits)
        if (p < 1) throw DomainError("digits must be >= 1");
}

}  // namespace

Word::Word(std::vector<Digit> digits) : digits_(std::move(digits)) { validate_digits(digits_); }

Word::Word(std::initializer_list<Digit> digits) : digits_(digits) { validate_digits(digits_); }

Word Word::rotated(std::size_t k) const {
    std::vector<Digit> out(digits_.size());
    const std::size_t n = digits_.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = digits_[(i + k) % n];
    return Word(std::move(out));
}

std::string Word::str() const {
    std::string s;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(digits_[i]);
    }
    return s;
}

Word parse_word(std::string_view text) {
    std::vector<Digit> digits;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view tok = text.substr(pos, comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        unsigned long long v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() ||
            v > std::numeric_limits<Digit>::max())
            throw DomainError("cannot parse word '" + std::string(text) + "'");
        digits.push_back(static_cast<Digit>(v));
        pos = comma + 1;
    }
    return Word(std::move(digits));
}

std::uint64_t checked_word_count(unsigned n, std::uint64_t max_digit, std::uint64_t budget) {
    if (n < 1 || max_digit < 1) throw DomainError("enumeration needs n >= 1 and max_digit >= 1");
    std::uint64_t total = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (total > budget / max_digit)
            throw BudgetError("enumeration of " + std::to_string(max_digit) + "^" +
                              std::to_string(n) + " words exceeds budget " +
                              std::to_string(budget));
        total *= max_digit;
    }
    if (total > budget)
        throw BudgetError("enumeration exceeds budget " + std::to_string(budget));
    return total;
}

WordEnumerator::WordEnumerator(unsigned n, Digit max_digit, std::uint64_t budget)
    : cur_(n, 1), max_digit_(max_digit), count_(checked_word_count(n, max_digit, budget)) {}

bool WordEnumerator::next(Word& out) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
    } else {
        std::size_t i = cur_.size();
        while (i > 0 && cur_[i - 1] == max_digit_) {
            cur_[i - 1] = 1;
            --i;
        }
        if (i == 0) {
            done_ = true;
            return false;
        }
        ++cur_[i - 1];
    }
    out = Word(cur_);
    return true;
}

std::vector<Word> enumerate_words(unsigned n, Digit max_digit, std::uint64_t budget) {
    WordEnumerator e(n, max_digit, budget);
    std::vector<Word> out;
    out.reserve(e.count());
    Word w;
    while (e.next(w)) out.push_back(w);
    return out;
}

std::vector<Word> cyclic_rotations(const Word& w) {
    std::vector<Word> out;
    for (std::size_t k = 0; k < w.size(); ++k) out.push_back(w.rotated(k));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Word canonical_rotation(const Word& w) {
    Word best = w;
    for (std::size_t k = 1; k < w.size(); ++k) best = std::min(best, w.rotated(k));
    return best;
}

WordDistance word_distance(const Word& x, const Word& y) {
    const std::size_t overlap = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < overlap; ++i)
        if (x[i] != y[i]) return {std::exp(-static_cast<double>(i + 1)), false};
    // The first disagreement, if any, is at index overlap + 1 or later.
    return {std::exp(-static_cast<double>(overlap + 1)), true};
}

}  // namespace rldp
