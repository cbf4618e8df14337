#pragma once

// Charts, unit systems, and differentiable scalar/vector fields.
//
// A ScalarField is evaluable at five nesting depths of the dual tower
// (plain complex up to four stacked derivative slots). That budget is what
// lets derived fields compose: taking a coordinate partial consumes one
// slot, a second-order jet consumes two, so e.g. a two-derivative
// coefficient (think d applied twice) can still be probed to second order.

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dual.hpp"

namespace gf {

using Point = std::vector<double>;

struct gf_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct chart_mismatch_error : gf_error {
    using gf_error::gf_error;
};

struct singular_point_error : gf_error {
    using gf_error::gf_error;
};

struct grade_error : gf_error {
    using gf_error::gf_error;
};

struct Chart {
    int dim = 0;
    std::vector<std::string> axes;
    std::vector<int> signature;  // +1 or -1 per axis, metric diag convention

    bool operator==(const Chart&) const = default;

    static Chart euclidean(int n) {
        Chart c;
        c.dim = n;
        static const char* xyz[] = {"x", "y", "z"};
        for (int i = 0; i < n; ++i) {
            c.axes.push_back(n <= 3 ? xyz[i] : "u" + std::to_string(i + 1));
            c.signature.push_back(+1);
        }
        return c;
    }

    static Chart minkowski() {
        Chart c;
        c.dim = 4;
        c.axes = {"t", "x", "y", "z"};
        c.signature = {-1, +1, +1, +1};
        return c;
    }

    // 1-D parameter line for curves and time axes
    static Chart line(const std::string& name = "s") {
        Chart c;
        c.dim = 1;
        c.axes = {name};
        c.signature = {+1};
        return c;
    }

    static Chart sphere() {
        Chart c;
        c.dim = 2;
        c.axes = {"phi", "theta"};  // azimuth, then polar angle from the pole
        c.signature = {+1, +1};
        return c;
    }

    static Chart polar() {
        Chart c;
        c.dim = 2;
        c.axes = {"r", "theta"};
        c.signature = {+1, +1};
        return c;
    }

    int axis_index(const std::string& name) const {
        for (int i = 0; i < dim; ++i)
            if (axes[i] == name) return i;
        throw gf_error("chart has no axis named '" + name + "'");
    }
};

inline void require_same_chart(const Chart& a, const Chart& b, const char* where) {
    if (!(a == b))
        throw chart_mismatch_error(std::string(where) + ": operands live on different charts");
}

struct UnitSystem {
    double hbar = 1.0;
    double c = 1.0;
    double e = 1.0;
    bool four_pi = true;  // Gaussian-style source coupling in the field laws

    static UnitSystem natural() { return {}; }

    // CGS-Gaussian constants, used where a dimensional answer is demanded
    // (notably the flux period of the two-path interference scan).
    static UnitSystem gaussian() {
        UnitSystem u;
        u.hbar = 1.054571817e-27;  // erg s
        u.c = 2.99792458e10;       // cm/s
        u.e = 4.80320425e-10;      // statC
        return u;
    }

    double source_coupling() const { return four_pi ? 4.0 * 3.14159265358979323846 : 1.0; }
};

// Second-order Taylor data of a field at a point.
struct Jet {
    int order = 0;
    cx value{};
    std::vector<cx> grad;
    std::vector<std::vector<cx>> hess;

    double real_value() const { return value.real(); }
    double real_grad(int i) const { return grad[i].real(); }
    double real_hess(int i, int j) const { return hess[i][j].real(); }
};

using SingularPred = std::function<bool(const Point&)>;

class ScalarField {
  public:
    struct Impl {
        virtual ~Impl() = default;
        virtual cx ev0(const std::vector<cx>&) const = 0;
        virtual d1 ev1(const std::vector<d1>&) const = 0;
        virtual d2 ev2(const std::vector<d2>&) const = 0;
        virtual d3 ev3(const std::vector<d3>&) const = 0;
        virtual d4 ev4(const std::vector<d4>&) const = 0;
    };

    template <class T>
    static T dispatch(const Impl& im, const std::vector<T>& x) {
        if constexpr (std::is_same_v<T, cx>)
            return im.ev0(x);
        else if constexpr (std::is_same_v<T, d1>)
            return im.ev1(x);
        else if constexpr (std::is_same_v<T, d2>)
            return im.ev2(x);
        else if constexpr (std::is_same_v<T, d3>)
            return im.ev3(x);
        else
            return im.ev4(x);
    }

  private:
    template <class F>
    struct LambdaImpl final : Impl {
        F f;
        explicit LambdaImpl(F fn) : f(std::move(fn)) {}
        cx ev0(const std::vector<cx>& x) const override { return f(x); }
        d1 ev1(const std::vector<d1>& x) const override { return f(x); }
        d2 ev2(const std::vector<d2>& x) const override { return f(x); }
        d3 ev3(const std::vector<d3>& x) const override { return f(x); }
        d4 ev4(const std::vector<d4>& x) const override { return f(x); }
    };

    // Coordinate partial: lifts the input one dual level, seeds the axis,
    // reads the derivative slot back out. The top level has no headroom
    // left, which is fine: nothing in the library stacks five derivatives.
    struct PartialImpl final : Impl {
        std::shared_ptr<const Impl> base;
        int axis;
        PartialImpl(std::shared_ptr<const Impl> b, int a) : base(std::move(b)), axis(a) {}

        template <class T>
        T lifted(const std::vector<T>& x) const {
            std::vector<Dual<T>> lx;
            lx.reserve(x.size());
            for (const auto& v : x) lx.emplace_back(v);
            lx[static_cast<size_t>(axis)].b = ad<T>::one();
            return dispatch(*base, lx).b;
        }

        cx ev0(const std::vector<cx>& x) const override { return lifted(x); }
        d1 ev1(const std::vector<d1>& x) const override { return lifted(x); }
        d2 ev2(const std::vector<d2>& x) const override { return lifted(x); }
        d3 ev3(const std::vector<d3>& x) const override { return lifted(x); }
        d4 ev4(const std::vector<d4>&) const override {
            throw gf_error("derivative nesting depth exhausted (internal ceiling of four slots)");
        }
    };

    Chart chart_;
    std::shared_ptr<const Impl> impl_;
    SingularPred singular_;

    ScalarField(Chart c, std::shared_ptr<const Impl> im, SingularPred s)
        : chart_(std::move(c)), impl_(std::move(im)), singular_(std::move(s)) {}

    static SingularPred merge(const SingularPred& a, const SingularPred& b) {
        if (!a) return b;
        if (!b) return a;
        return [a, b](const Point& p) { return a(p) || b(p); };
    }

  public:
    ScalarField() = default;

    // f must be a generic callable over std::vector<T> for every tower level.
    template <class F>
    static ScalarField make(Chart c, F f, SingularPred singular = nullptr) {
        return ScalarField(std::move(c),
                           std::make_shared<LambdaImpl<F>>(std::move(f)),
                           std::move(singular));
    }

    static ScalarField constant(Chart c, cx v) {
        return make(std::move(c), [v](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            (void)x;
            return ad<T>::lift(v);
        });
    }

    static ScalarField coordinate(Chart c, int axis) {
        if (axis < 0 || axis >= c.dim) throw gf_error("coordinate axis out of range");
        return make(std::move(c), [axis](const auto& x) { return x[static_cast<size_t>(axis)]; });
    }

    const Chart& chart() const { return chart_; }
    bool valid() const { return impl_ != nullptr; }
    const SingularPred& singular_pred() const { return singular_; }
    std::shared_ptr<const Impl> impl() const { return impl_; }

    void check_regular(const Point& p) const {
        if (singular_ && singular_(p))
            throw singular_point_error("field evaluated at an excluded (singular) point");
    }

    template <class T>
    T eval(const std::vector<T>& x) const {
        return dispatch(*impl_, x);
    }

    cx value(const Point& p) const {
        check_regular(p);
        std::vector<cx> x(p.begin(), p.end());
        return impl_->ev0(x);
    }

    double real_value(const Point& p) const { return value(p).real(); }

    Jet jet(const Point& p, int order) const {
        check_regular(p);
        const int n = chart_.dim;
        Jet out;
        out.order = order;
        if (order <= 0) {
            std::vector<cx> x(p.begin(), p.end());
            out.value = impl_->ev0(x);
            return out;
        }
        out.grad.assign(n, cx{});
        if (order == 1) {
            for (int i = 0; i < n; ++i) {
                std::vector<d1> x;
                x.reserve(n);
                for (double v : p) x.emplace_back(cx(v));
                x[static_cast<size_t>(i)].b = cx(1.0);
                d1 r = impl_->ev1(x);
                out.value = r.a;
                out.grad[static_cast<size_t>(i)] = r.b;
            }
            return out;
        }
        // order 2: hyper-dual sweep over index pairs, exact mixed partials
        out.hess.assign(n, std::vector<cx>(n, cx{}));
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                std::vector<d2> x;
                x.reserve(n);
                for (double v : p) x.emplace_back(d1(cx(v)));
                x[static_cast<size_t>(j)].a.b = cx(1.0);  // inner slot: axis j
                x[static_cast<size_t>(i)].b = d1(cx(1.0));  // outer slot: axis i
                d2 r = impl_->ev2(x);
                out.value = r.a.a;
                out.grad[static_cast<size_t>(j)] = r.a.b;
                out.grad[static_cast<size_t>(i)] = r.b.a;
                out.hess[static_cast<size_t>(i)][static_cast<size_t>(j)] = r.b.b;
                out.hess[static_cast<size_t>(j)][static_cast<size_t>(i)] = r.b.b;
            }
        }
        return out;
    }

    ScalarField partial(int axis) const {
        if (axis < 0 || axis >= chart_.dim) throw gf_error("partial: axis out of range");
        return ScalarField(chart_, std::make_shared<PartialImpl>(impl_, axis), singular_);
    }

    ScalarField scaled(cx s) const {
        auto im = impl_;
        return make_composed(chart_, singular_, [im, s](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            return dispatch(*im, x) * ad<T>::lift(s);
        });
    }

    friend ScalarField operator+(const ScalarField& f, const ScalarField& g) {
        require_same_chart(f.chart_, g.chart_, "field sum");
        auto a = f.impl_, b = g.impl_;
        return make_composed(f.chart_, merge(f.singular_, g.singular_),
                             [a, b](const auto& x) { return dispatch(*a, x) + dispatch(*b, x); });
    }

    friend ScalarField operator-(const ScalarField& f, const ScalarField& g) {
        require_same_chart(f.chart_, g.chart_, "field difference");
        auto a = f.impl_, b = g.impl_;
        return make_composed(f.chart_, merge(f.singular_, g.singular_),
                             [a, b](const auto& x) { return dispatch(*a, x) - dispatch(*b, x); });
    }

    friend ScalarField operator*(const ScalarField& f, const ScalarField& g) {
        require_same_chart(f.chart_, g.chart_, "field product");
        auto a = f.impl_, b = g.impl_;
        return make_composed(f.chart_, merge(f.singular_, g.singular_),
                             [a, b](const auto& x) { return dispatch(*a, x) * dispatch(*b, x); });
    }

    friend ScalarField operator-(const ScalarField& f) { return f.scaled(cx(-1.0)); }
    friend ScalarField operator*(const ScalarField& f, double s) { return f.scaled(cx(s)); }
    friend ScalarField operator*(double s, const ScalarField& f) { return f.scaled(cx(s)); }

  private:
    template <class F>
    static ScalarField make_composed(Chart c, SingularPred s, F f) {
        return ScalarField(std::move(c),
                           std::make_shared<LambdaImpl<F>>(std::move(f)),
                           std::move(s));
    }
};

struct VectorField {
    Chart chart;
    std::vector<ScalarField> comp;

    static VectorField constant(const Chart& c, const std::vector<double>& v) {
        if (static_cast<int>(v.size()) != c.dim)
            throw gf_error("constant vector field: component count != chart dimension");
        VectorField out;
        out.chart = c;
        for (double vi : v) out.comp.push_back(ScalarField::constant(c, cx(vi)));
        return out;
    }

    std::vector<double> value(const Point& p) const {
        std::vector<double> out;
        out.reserve(comp.size());
        for (const auto& f : comp) out.push_back(f.real_value(p));
        return out;
    }
};

// --- vector calculus on a chart ---

inline std::vector<double> gradient(const ScalarField& f, const Point& p) {
    Jet j = f.jet(p, 1);
    std::vector<double> g(j.grad.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = j.grad[i].real();
    return g;
}

inline double divergence(const VectorField& v, const Point& p) {
    double s = 0.0;
    for (int i = 0; i < v.chart.dim; ++i) {
        Jet j = v.comp[static_cast<size_t>(i)].jet(p, 1);
        s += j.grad[static_cast<size_t>(i)].real();
    }
    return s;
}

inline std::array<double, 3> curl(const VectorField& v, const Point& p) {
    if (v.chart.dim != 3) throw gf_error("curl requires a 3-dimensional chart");
    std::array<std::array<double, 3>, 3> dv{};  // dv[i][j] = d v_i / d x_j
    for (int i = 0; i < 3; ++i) {
        Jet j = v.comp[static_cast<size_t>(i)].jet(p, 1);
        for (int k = 0; k < 3; ++k) dv[i][k] = j.grad[static_cast<size_t>(k)].real();
    }
    return {dv[2][1] - dv[1][2], dv[0][2] - dv[2][0], dv[1][0] - dv[0][1]};
}

// Signature-weighted trace of the Hessian: the flat wave/Laplace operator
// of the chart, e.g. -d2/dt2 + div grad on the spacetime chart.
inline double laplacian(const ScalarField& f, const Point& p) {
    Jet j = f.jet(p, 2);
    double s = 0.0;
    for (int i = 0; i < f.chart().dim; ++i)
        s += f.chart().signature[static_cast<size_t>(i)] *
             j.hess[static_cast<size_t>(i)][static_cast<size_t>(i)].real();
    return s;
}

inline ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart, b.chart, "dot");
    if (a.comp.size() != b.comp.size()) throw gf_error("dot: component count mismatch");
    ScalarField s = a.comp[0] * b.comp[0];
    for (size_t i = 1; i < a.comp.size(); ++i) s = s + a.comp[i] * b.comp[i];
    return s;
}

}  // namespace gf
