#include "excursion/numeric.hpp"

#include <algorithm>

namespace excursion {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    double worst_gap = 0.0;
    bool converged = true;
};

double simpson_panel(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = simpson_panel(fa, flm, fm, m - a);
    const double right = simpson_panel(fm, frm, fb, b - m);
    const double gap = left + right - whole;
    if (std::fabs(gap) <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && std::fabs(gap) > 15.0 * tol) {
            st.converged = false;
            st.worst_gap = std::max(st.worst_gap, std::fabs(gap) / 15.0);
        }
        return left + right + gap / 15.0;
    }
    return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

QuadratureResult adaptive_simpson_checked(const std::function<double(double)>& f, double a,
                                          double b, double abs_tol, int max_depth) {
    QuadratureResult out;
    if (a == b) return out;
    SimpsonState st;
    st.f = &f;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_panel(fa, fm, fb, b - a);
    out.value = recurse(st, a, b, fa, fm, fb, whole, abs_tol, max_depth);
    out.converged = st.converged;
    out.achieved_tol = st.converged ? abs_tol : st.worst_gap;
    return out;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    return adaptive_simpson_checked(f, a, b, abs_tol, max_depth).value;
}

} // namespace excursion
