#include "meandim/window.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace meandim {

FiniteWindow::FiniteWindow(std::vector<long> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

FiniteWindow::FiniteWindow(std::initializer_list<long> elems)
    : FiniteWindow(std::vector<long>(elems)) {}

FiniteWindow FiniteWindow::interval(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("interval: lo > hi");
    std::vector<long> v;
    v.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long g = lo; g <= hi; ++g) v.push_back(g);
    return FiniteWindow(std::move(v));
}

bool FiniteWindow::contains(long g) const {
    return std::binary_search(elems_.begin(), elems_.end(), g);
}

long FiniteWindow::min() const {
    if (elems_.empty()) throw std::logic_error("empty window");
    return elems_.front();
}

long FiniteWindow::max() const {
    if (elems_.empty()) throw std::logic_error("empty window");
    return elems_.back();
}

FiniteWindow FiniteWindow::translated(long g) const {
    std::vector<long> v = elems_;
    for (long& x : v) x += g;
    return FiniteWindow(std::move(v));
}

FiniteWindow FiniteWindow::united(const FiniteWindow& other) const {
    std::vector<long> v = elems_;
    v.insert(v.end(), other.elems_.begin(), other.elems_.end());
    return FiniteWindow(std::move(v));
}

bool FiniteWindow::subset_of(const FiniteWindow& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(),
                         elems_.end());
}

FiniteWindow sum_set(const FiniteWindow& k, const FiniteWindow& f) {
    if (k.empty() || f.empty()) throw std::invalid_argument("empty window");
    std::set<long> out;
    for (long a : k.elements())
        for (long b : f.elements()) out.insert(a + b);
    return FiniteWindow(std::vector<long>(out.begin(), out.end()));
}

FiniteWindow boundary(const FiniteWindow& f, const FiniteWindow& k) {
    FiniteWindow kf = sum_set(k, f);
    std::vector<long> out;
    for (long g : kf.elements())
        if (!f.contains(g)) out.push_back(g);
    return FiniteWindow(std::move(out));
}

bool is_invariant(const FiniteWindow& f, const InvarianceParams& p) {
    if (f.empty()) throw std::invalid_argument("empty window");
    if (p.delta < 0) throw std::invalid_argument("delta must be nonnegative");
    Rational lhs(static_cast<long long>(boundary(f, p.k).size()));
    Rational rhs = p.delta * Rational(static_cast<long long>(f.size()));
    return lhs <= rhs;
}

FiniteWindow folner_interval(long n) {
    if (n < 1) throw std::invalid_argument("folner_interval requires n >= 1");
    return FiniteWindow::interval(0, n - 1);
}

}  // namespace meandim
