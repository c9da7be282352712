#pragma once

#include <functional>

namespace slnatlas::ode {

// Integrates the scalar autonomous ODE y' = f(y) from y(0) = y0 to y(t)
// with the embedded Dormand-Prince 5(4) pair and standard step control.
// Works on the real line; circle flows pass the lifted angle and reduce
// afterwards. Negative t integrates backwards.
double integrate(const std::function<double(double)>& f, double y0, double t,
                 double rel_tol = 1e-10, double abs_tol = 1e-12);

}  // namespace slnatlas::ode
