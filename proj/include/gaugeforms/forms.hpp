#pragma once

// Exterior algebra over a chart: sparse k-forms with field coefficients.
//
// Terms are keyed by strictly increasing multi-indices. Any constructor
// input gets normalized by an insertion sort whose swap count fixes the
// sign; repeated axes annihilate the term. The stars are the two ad-hoc
// tables the field equations need (3-D Euclidean 1<->2 and the spacetime
// tables for field-strength-shaped 2-forms and current 1<->3), not a
// general metric Hodge.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "chart.hpp"

namespace gf {

using MultiIndex = std::vector<int>;

// Sorts idx in place, returns the permutation sign, or 0 on a repeat.
inline int normalize_index(MultiIndex& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        size_t j = i;
        while (j > 0 && idx[j - 1] > idx[j]) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
            --j;
        }
    }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

struct KForm {
    Chart chart;
    int grade = 0;
    std::map<MultiIndex, ScalarField> terms;

    static KForm zero(Chart c, int grade) {
        if (grade < 0 || grade > c.dim) throw grade_error("form grade outside [0, dim]");
        KForm w;
        w.chart = std::move(c);
        w.grade = grade;
        return w;
    }

    // Accepts an arbitrary index tuple; canonicalizes and accumulates.
    void add_term(MultiIndex idx, const ScalarField& f) {
        if (static_cast<int>(idx.size()) != grade)
            throw grade_error("term index length != form grade");
        for (int a : idx)
            if (a < 0 || a >= chart.dim) throw gf_error("form term: axis out of range");
        int sign = normalize_index(idx);
        if (sign == 0) return;
        ScalarField g = (sign == 1) ? f : f.scaled(cx(-1.0));
        auto it = terms.find(idx);
        if (it == terms.end())
            terms.emplace(std::move(idx), g);
        else
            it->second = it->second + g;
    }

    bool has_term(const MultiIndex& sorted) const { return terms.count(sorted) > 0; }

    // Coefficient of the canonical (sorted) basis element; zero if absent.
    ScalarField coeff(const MultiIndex& sorted) const {
        auto it = terms.find(sorted);
        if (it != terms.end()) return it->second;
        return ScalarField::constant(chart, cx(0.0));
    }

    KForm scaled(cx s) const {
        KForm out = zero(chart, grade);
        for (const auto& [idx, f] : terms) out.terms.emplace(idx, f.scaled(s));
        return out;
    }

    friend KForm operator+(const KForm& u, const KForm& v) {
        require_same_chart(u.chart, v.chart, "form sum");
        if (u.grade != v.grade) throw grade_error("form sum: mixed grades");
        KForm out = u;
        for (const auto& [idx, f] : v.terms) {
            auto it = out.terms.find(idx);
            if (it == out.terms.end())
                out.terms.emplace(idx, f);
            else
                it->second = it->second + f;
        }
        return out;
    }

    friend KForm operator-(const KForm& u, const KForm& v) { return u + v.scaled(cx(-1.0)); }
};

// Point with an ordered list of edge vectors: the argument of a k-form.
struct PLP {
    Point point;
    std::vector<std::vector<double>> edges;
};

namespace detail {

inline double det_small(const std::vector<std::vector<double>>& m) {
    const size_t k = m.size();
    if (k == 0) return 1.0;
    if (k == 1) return m[0][0];
    if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    double s = 0.0;
    for (size_t c = 0; c < k; ++c) {
        std::vector<std::vector<double>> minor;
        minor.reserve(k - 1);
        for (size_t r = 1; r < k; ++r) {
            std::vector<double> row;
            row.reserve(k - 1);
            for (size_t cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(std::move(row));
        }
        double piv = m[0][c] * det_small(minor);
        s += (c % 2 == 0) ? piv : -piv;
    }
    return s;
}

}  // namespace detail

// Multilinear alternating evaluation: sum over terms of
// coeff(P) * det[ edges[a][ I[b] ] ].
inline double apply(const KForm& w, const PLP& plp) {
    if (static_cast<int>(plp.edges.size()) != w.grade)
        throw grade_error("apply: edge count != form grade");
    double out = 0.0;
    for (const auto& [idx, f] : w.terms) {
        std::vector<std::vector<double>> m(idx.size(), std::vector<double>(idx.size()));
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = 0; b < idx.size(); ++b)
                m[a][b] = plp.edges[a][static_cast<size_t>(idx[b])];
        out += f.real_value(plp.point) * detail::det_small(m);
    }
    return out;
}

inline KForm wedge(const KForm& u, const KForm& v) {
    require_same_chart(u.chart, v.chart, "wedge");
    int g = u.grade + v.grade;
    if (g > u.chart.dim) return KForm::zero(u.chart, std::min(g, u.chart.dim));
    KForm out = KForm::zero(u.chart, g);
    for (const auto& [iu, fu] : u.terms)
        for (const auto& [iv, fv] : v.terms) {
            MultiIndex merged = iu;
            merged.insert(merged.end(), iv.begin(), iv.end());
            out.add_term(std::move(merged), fu * fv);
        }
    return out;
}

// Exterior derivative: d(f dx^I) = sum_a (df/dx^a) dx^a ^ dx^I.
inline KForm d(const KForm& w) {
    if (w.grade >= w.chart.dim) return KForm::zero(w.chart, w.chart.dim);
    KForm out = KForm::zero(w.chart, w.grade + 1);
    for (const auto& [idx, f] : w.terms) {
        for (int a = 0; a < w.chart.dim; ++a) {
            bool present = false;
            for (int b : idx)
                if (b == a) { present = true; break; }
            if (present) continue;
            MultiIndex ni;
            ni.reserve(idx.size() + 1);
            ni.push_back(a);
            ni.insert(ni.end(), idx.begin(), idx.end());
            out.add_term(std::move(ni), f.partial(a));
        }
    }
    return out;
}

// Interior product (contraction with the first slot):
// i_v(f dx^I) = sum_p (-1)^p v^{I_p} f dx^{I \ I_p}.
inline KForm interior(const VectorField& v, const KForm& w) {
    require_same_chart(v.chart, w.chart, "interior product");
    if (w.grade == 0) throw grade_error("interior product of a 0-form");
    if (static_cast<int>(v.comp.size()) != v.chart.dim)
        throw gf_error("interior product: vector field must span the chart");
    KForm out = KForm::zero(w.chart, w.grade - 1);
    for (const auto& [idx, f] : w.terms) {
        for (size_t p = 0; p < idx.size(); ++p) {
            MultiIndex ni;
            ni.reserve(idx.size() - 1);
            for (size_t q = 0; q < idx.size(); ++q)
                if (q != p) ni.push_back(idx[q]);
            ScalarField coeff = v.comp[static_cast<size_t>(idx[p])] * f;
            if (p % 2 == 1) coeff = coeff.scaled(cx(-1.0));
            out.add_term(std::move(ni), coeff);
        }
    }
    return out;
}

namespace detail {

inline bool is_euclid3(const Chart& c) {
    return c.dim == 3 && c.signature == std::vector<int>{+1, +1, +1};
}

inline bool is_minkowski(const Chart& c) {
    return c.dim == 4 && c.signature == std::vector<int>{-1, +1, +1, +1};
}

}  // namespace detail

// 3-D Euclidean star restricted to the 1 <-> 2 pairing
// (the classical field <-> flux-form dictionary).
inline KForm star3(const KForm& w) {
    if (!detail::is_euclid3(w.chart))
        throw chart_mismatch_error("star3 needs a 3-D Euclidean chart");
    if (w.grade == 1) {
        KForm out = KForm::zero(w.chart, 2);
        out.add_term({1, 2}, w.coeff({0}));
        out.add_term({0, 2}, w.coeff({1}).scaled(cx(-1.0)));
        out.add_term({0, 1}, w.coeff({2}));
        return out;
    }
    if (w.grade == 2) {
        KForm out = KForm::zero(w.chart, 1);
        out.add_term({0}, w.coeff({1, 2}));
        out.add_term({1}, w.coeff({0, 2}).scaled(cx(-1.0)));
        out.add_term({2}, w.coeff({0, 1}));
        return out;
    }
    throw grade_error("star3 is defined for grades 1 and 2 only");
}

// Spacetime star tables. Grade 2 assumes the field-strength block shape
// (electric dt^dx^i part plus magnetic spatial part); grades 1 and 3 are
// the charge-current pairing. Other grades are rejected on purpose.
inline KForm star4(const KForm& w) {
    if (!detail::is_minkowski(w.chart))
        throw chart_mismatch_error("star4 needs the spacetime chart");
    if (w.grade == 2) {
        KForm out = KForm::zero(w.chart, 2);
        out.add_term({0, 1}, w.coeff({2, 3}));
        out.add_term({0, 2}, w.coeff({1, 3}).scaled(cx(-1.0)));
        out.add_term({0, 3}, w.coeff({1, 2}));
        out.add_term({2, 3}, w.coeff({0, 1}).scaled(cx(-1.0)));
        out.add_term({1, 3}, w.coeff({0, 2}));
        out.add_term({1, 2}, w.coeff({0, 3}).scaled(cx(-1.0)));
        return out;
    }
    if (w.grade == 1) {
        KForm out = KForm::zero(w.chart, 3);
        out.add_term({1, 2, 3}, w.coeff({0}));
        out.add_term({0, 2, 3}, w.coeff({1}).scaled(cx(-1.0)));
        out.add_term({0, 1, 3}, w.coeff({2}));
        out.add_term({0, 1, 2}, w.coeff({3}).scaled(cx(-1.0)));
        return out;
    }
    if (w.grade == 3) {
        KForm out = KForm::zero(w.chart, 1);
        out.add_term({0}, w.coeff({1, 2, 3}));
        out.add_term({1}, w.coeff({0, 2, 3}).scaled(cx(-1.0)));
        out.add_term({2}, w.coeff({0, 1, 3}));
        out.add_term({3}, w.coeff({0, 1, 2}).scaled(cx(-1.0)));
        return out;
    }
    throw grade_error("star4 is defined for grades 1, 2 and 3 only");
}

// Differentiable parametrized curve: components are fields on a 1-D chart.
struct Curve {
    Chart chart;                     // target chart
    std::vector<ScalarField> comp;   // components as functions of the parameter
    double s0 = 0.0, s1 = 1.0;

    template <class F>
    static Curve make(Chart target, F f, double s0, double s1) {
        // f: generic callable T -> std::vector<T> giving the coordinates
        Curve c;
        c.chart = std::move(target);
        c.s0 = s0;
        c.s1 = s1;
        Chart param = Chart::line();
        for (int i = 0; i < c.chart.dim; ++i) {
            c.comp.push_back(ScalarField::make(param, [f, i](const auto& x) {
                return f(x[0])[static_cast<size_t>(i)];
            }));
        }
        return c;
    }

    Point at(double s) const {
        Point p(comp.size());
        for (size_t i = 0; i < comp.size(); ++i) p[i] = comp[i].real_value({s});
        return p;
    }

    // position and velocity in one pass
    void sample(double s, Point& pos, Point& vel) const {
        pos.resize(comp.size());
        vel.resize(comp.size());
        for (size_t i = 0; i < comp.size(); ++i) {
            Jet j = comp[i].jet({s}, 1);
            pos[i] = j.real_value();
            vel[i] = j.real_grad(0);
        }
    }
};

// Pullback of a 1-form along the curve, integrated by composite Simpson
// with 2^k panels.
inline double integrate_line(const KForm& w, const Curve& curve, int k = 10) {
    if (w.grade != 1) throw grade_error("integrate_line expects a 1-form");
    require_same_chart(w.chart, curve.chart, "integrate_line");
    const long n = 1L << k;  // panels (even by construction)
    const double h = (curve.s1 - curve.s0) / static_cast<double>(n);

    auto integrand = [&](double s) {
        Point pos, vel;
        curve.sample(s, pos, vel);
        double acc = 0.0;
        for (const auto& [idx, f] : w.terms)
            acc += f.real_value(pos) * vel[static_cast<size_t>(idx[0])];
        return acc;
    };

    double sum = integrand(curve.s0) + integrand(curve.s1);
    for (long i = 1; i < n; ++i)
        sum += integrand(curve.s0 + h * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace gf
