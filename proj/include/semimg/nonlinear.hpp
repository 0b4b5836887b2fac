#pragma once

#include <functional>
#include <string>

namespace semimg {

/// The reaction term f(x, u) of -div(A grad u) + f(x, u) = g.
///
/// f must be monotone in u. `derivative` (df/du) is optional; without it the
/// Jacobian is built from central differences. `lipschitz` bounds |df/du| on
/// an interval [lo, hi] of u values.
struct NonlinearTerm {
  using Function = std::function<double(double x, double y, double u)>;

  std::string name;
  Function eval;
  Function derivative;
  std::function<double(double lo, double hi)> lipschitz;

  double operator()(double x, double y, double u) const { return eval(x, y, u); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
  bool is_zero() const { return !eval; }

  static NonlinearTerm zero() {
    NonlinearTerm f;
    f.name = "zero";
    f.lipschitz = [](double, double) { return 0.0; };
    return f;
  }
};

}  // namespace semimg
