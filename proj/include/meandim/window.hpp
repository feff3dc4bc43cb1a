#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "meandim/rational.hpp"

namespace meandim {

/// A non-empty finite subset of the integers, kept sorted and deduplicated.
/// Plays the role of a translation window: a Folner set, a boundary probe,
/// or a tower shape.
class FiniteWindow {
public:
    FiniteWindow() = default;
    explicit FiniteWindow(std::vector<long> elems);
    FiniteWindow(std::initializer_list<long> elems);

    /// The interval {lo, ..., hi}; requires lo <= hi.
    static FiniteWindow interval(long lo, long hi);

    const std::vector<long>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(long g) const;
    long min() const;
    long max() const;

    FiniteWindow translated(long g) const;
    FiniteWindow united(const FiniteWindow& other) const;
    bool subset_of(const FiniteWindow& other) const;

    bool operator==(const FiniteWindow& other) const = default;

private:
    std::vector<long> elems_;
};

struct InvarianceParams {
    FiniteWindow k;
    Rational delta;  // must be >= 0
};

/// {a+b : a in k, b in f}, sorted and deduplicated. Both inputs non-empty.
FiniteWindow sum_set(const FiniteWindow& k, const FiniteWindow& f);

/// sum_set(k, f) \ f. The K-boundary of f; may be empty.
FiniteWindow boundary(const FiniteWindow& f, const FiniteWindow& k);

/// |boundary(f, K)| <= delta * |f|, compared in exact rational arithmetic.
bool is_invariant(const FiniteWindow& f, const InvarianceParams& p);

/// {0, ..., n-1}; the canonical Folner sequence for the integers.
FiniteWindow folner_interval(long n);

}  // namespace meandim
