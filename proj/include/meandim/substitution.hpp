#pragma once

#include <map>
#include <string>
#include <vector>

#include "meandim/rational.hpp"

namespace meandim {

/// A primitive substitution on a finite alphabet. Primitivity (some power of
/// the substitution maps every symbol to a word containing every symbol) is
/// checked at construction.
class SubstitutionSystem {
public:
    SubstitutionSystem(std::vector<char> alphabet, std::map<char, std::string> rules);

    static SubstitutionSystem fibonacci();  // a -> ab, b -> a

    const std::vector<char>& alphabet() const { return alphabet_; }
    const std::string& rule(char symbol) const;

    std::string apply(const std::string& word) const;

private:
    std::vector<char> alphabet_;
    std::map<char, std::string> rules_;
};

/// Length-L prefix of the substitution fixed point seeded at seed_symbol.
/// Requires rule(seed_symbol) to start with seed_symbol and L >= 1.
std::string substitution_fixed_word(const SubstitutionSystem& s, char seed_symbol, long length);

struct ReturnWord {
    std::string word;
    long frequency = 0;  // occurrences observed within the horizon
};

/// Distinct return words of w in the fixed point: the segments between
/// consecutive occurrence starts of w within the length-L prefix, each tagged
/// with its observed frequency, ordered by first appearance. Throws
/// "insufficient horizon" if w occurs fewer than twice.
std::vector<ReturnWord> return_words(const SubstitutionSystem& s, const std::string& w,
                                     long horizon);

}  // namespace meandim
