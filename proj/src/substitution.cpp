#include "meandim/substitution.hpp"

#include <algorithm>
#include <stdexcept>

namespace meandim {

namespace {

// Primitivity: the boolean incidence matrix has a power with all entries set.
bool is_primitive(const std::vector<char>& alphabet, const std::map<char, std::string>& rules) {
    const std::size_t n = alphabet.size();
    auto index = [&](char c) {
        return static_cast<std::size_t>(
            std::find(alphabet.begin(), alphabet.end(), c) - alphabet.begin());
    };
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (char c : rules.at(alphabet[i])) reach[i][index(c)] = true;
    // Square repeatedly; 2^n covers every power that matters.
    for (std::size_t step = 0; step < n + 1; ++step) {
        bool all = true;
        for (auto& row : reach)
            for (bool b : row) all = all && b;
        if (all) return true;
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][j])
                    for (std::size_t l = 0; l < n; ++l)
                        if (reach[j][l]) next[i][l] = true;
        // keep one-step reachability so odd powers are not lost
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][j]) next[i][j] = true;
        reach = std::move(next);
    }
    return false;
}

}  // namespace

SubstitutionSystem::SubstitutionSystem(std::vector<char> alphabet,
                                       std::map<char, std::string> rules)
    : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
    if (alphabet_.empty()) throw std::invalid_argument("empty alphabet");
    for (char c : alphabet_) {
        auto it = rules_.find(c);
        if (it == rules_.end() || it->second.empty())
            throw std::invalid_argument(std::string("missing or empty rule for symbol ") + c);
        for (char d : it->second)
            if (std::find(alphabet_.begin(), alphabet_.end(), d) == alphabet_.end())
                throw std::invalid_argument(std::string("rule uses unknown symbol ") + d);
    }
    if (!is_primitive(alphabet_, rules_))
        throw std::invalid_argument("substitution is not primitive");
}

SubstitutionSystem SubstitutionSystem::fibonacci() {
    return SubstitutionSystem({'a', 'b'}, {{'a', "ab"}, {'b', "a"}});
}

const std::string& SubstitutionSystem::rule(char symbol) const {
    auto it = rules_.find(symbol);
    if (it == rules_.end()) throw std::invalid_argument("unknown symbol");
    return it->second;
}

std::string SubstitutionSystem::apply(const std::string& word) const {
    std::string out;
    for (char c : word) out += rule(c);
    return out;
}

std::string substitution_fixed_word(const SubstitutionSystem& s, char seed_symbol,
                                    long length) {
    if (length < 1) throw std::invalid_argument("length must be >= 1");
    const std::string& seed_rule = s.rule(seed_symbol);
    if (seed_rule.empty() || seed_rule[0] != seed_symbol)
        throw std::invalid_argument("seed symbol is not extendable: rule must start with it");
    std::string w(1, seed_symbol);
    while (static_cast<long>(w.size()) < length) {
        std::string next = s.apply(w);
        if (next.size() <= w.size())
            throw std::logic_error("substitution does not grow from seed");
        w = std::move(next);
    }
    return w.substr(0, static_cast<std::size_t>(length));
}

std::vector<ReturnWord> return_words(const SubstitutionSystem& s, const std::string& w,
                                     long horizon) {
    if (w.empty()) throw std::invalid_argument("empty word");
    char seed = 0;
    for (char c : s.alphabet())
        if (s.rule(c)[0] == c) { seed = c; break; }
    if (seed == 0) throw std::invalid_argument("substitution has no extendable seed symbol");
    std::string text = substitution_fixed_word(s, seed, horizon);
    std::vector<std::size_t> occ;
    for (std::size_t p = 0; p + w.size() <= text.size(); ++p)
        if (text.compare(p, w.size(), w) == 0) occ.push_back(p);
    if (occ.size() < 2) throw std::runtime_error("insufficient horizon");
    std::vector<ReturnWord> out;
    for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
        std::string r = text.substr(occ[i], occ[i + 1] - occ[i]);
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const ReturnWord& rw) { return rw.word == r; });
        if (it == out.end())
            out.push_back({r, 1});
        else
            ++it->frequency;
    }
    return out;
}

}  // namespace meandim
