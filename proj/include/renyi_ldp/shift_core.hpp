#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rldp {

// Markov-partition index p >= 1. The continued-fraction digit is p + 1.
using Digit = std::uint32_t;

inline constexpr std::uint64_t kDefaultBudget = 100'000'000ULL;

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Digit> digits);
    Word(std::initializer_list<Digit> digits);

    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    Digit operator[](std::size_t i) const { return digits_[i]; }
    const std::vector<Digit>& digits() const { return digits_; }

    // Continued-fraction digit d = p + 1 at position i.
    std::uint64_t cf_digit(std::size_t i) const { return std::uint64_t{digits_[i]} + 1; }

    Word rotated(std::size_t k) const;
    std::string str() const;

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<Digit> digits_;
};

// A word read as one period of the periodic sequence it generates.
struct PeriodicWord {
    Word word;
    std::size_t period() const { return word.size(); }
};

// Parses "2,1,1,3". Throws DomainError on empty input, zero digits or junk.
Word parse_word(std::string_view text);

// max_digit^n, or throws BudgetError when it exceeds budget.
std::uint64_t checked_word_count(unsigned n, std::uint64_t max_digit, std::uint64_t budget);

// Lexicographic stream over {1..max_digit}^n.
class WordEnumerator {
public:
    WordEnumerator(unsigned n, Digit max_digit, std::uint64_t budget = kDefaultBudget);
    bool next(Word& out);
    std::uint64_t count() const { return count_; }

private:
    std::vector<Digit> cur_;
    Digit max_digit_;
    std::uint64_t count_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<Word> enumerate_words(unsigned n, Digit max_digit,
                                  std::uint64_t budget = kDefaultBudget);

// Distinct cyclic rotations in lexicographic order.
std::vector<Word> cyclic_rotations(const Word& w);

// Smallest rotation; identifies the orbit a periodic word codes.
Word canonical_rotation(const Word& w);

struct WordDistance {
    double value;
    // True when the prefixes agree on their whole overlap, so value is only an upper bound.
    bool upper_bound_only;
};

// exp(-k) with k the 1-based index of the first disagreement.
WordDistance word_distance(const Word& x_prefix, const Word& y_prefix);

}  // namespace rldp
