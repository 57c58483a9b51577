#pragma once

#include <string>
#include <vector>

#include <yonedalab/homalg.hpp>

namespace fx {

using yl::Arrow;
using yl::QuiverPresentation;

// k[x]/(x^n)
inline QuiverPresentation truncated_poly(int n) {
    QuiverPresentation q;
    q.vertices = {"1"};
    q.arrows = {Arrow{"x", 0, 0}};
    q.relations = {{{mpq_class(1), std::vector<std::string>(n, "x")}}};
    return q;
}

// 1 -> 2, single arrow
inline QuiverPresentation a2() {
    QuiverPresentation q;
    q.vertices = {"1", "2"};
    q.arrows = {Arrow{"a", 0, 1}};
    return q;
}

// k[x,y]/(x,y)^2, not Gorenstein
inline QuiverPresentation local_rad2() {
    QuiverPresentation q;
    q.vertices = {"1"};
    q.arrows = {Arrow{"x", 0, 0}, Arrow{"y", 0, 0}};
    for (auto u : {"x", "y"})
        for (auto v : {"x", "y"}) q.relations.push_back({{mpq_class(1), {u, v}}});
    return q;
}

// cyclic 1 <-> 2 with radical square zero, self-injective
inline QuiverPresentation nakayama2() {
    QuiverPresentation q;
    q.vertices = {"1", "2"};
    q.arrows = {Arrow{"a", 0, 1}, Arrow{"b", 1, 0}};
    q.relations = {{{mpq_class(1), {"a", "b"}}}, {{mpq_class(1), {"b", "a"}}}};
    return q;
}

template <class F>
yl::Algebra<F> make(const F& f, const QuiverPresentation& q) { return yl::quiver_to_algebra(f, q); }

} // namespace fx
