#include "wigner/grid.hpp"

namespace wigner {

GridSpec make_grid(int n_q, double dq, int n_y, double dy) {
  if (n_q < 2 || n_y < 2 || n_q % 2 != 0 || n_y % 2 != 0) {
    throw Error("grid sizes must be even and at least 2");
  }
  if (!(dq > 0.0) || !(dy > 0.0)) {
    throw Error("grid steps must be positive");
  }
  GridSpec g;
  g.n_q = n_q;
  g.n_y = n_y;
  g.n_p = n_y;
  g.dq = dq;
  g.dy = dy;
  g.dp = 2.0 * std::numbers::pi / (n_y * dy);
  g.q_max = n_q * dq / 2.0;
  g.p_max = g.n_p * g.dp / 2.0;
  return g;
}

GridSpec make_phase_grid(int n_q, double dq, int n_p, double dp) {
  if (!(dp > 0.0) || n_p < 2) throw Error("momentum step must be positive");
  GridSpec g = make_grid(n_q, dq, n_p, 2.0 * std::numbers::pi / (n_p * dp));
  g.dp = dp;
  g.p_max = n_p * dp / 2.0;
  return g;
}

GridSpec make_balanced_grid() { return make_grid(384, 0.0625, 768, 0.0625); }

GridSpec make_oracle_grid() { return make_grid(32, 0.5, 64, 0.5); }

GridSpec make_reduced_grid() { return make_grid(128, 0.125, 256, 0.125); }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw Error(std::string(what) + ": grid mismatch");
  }
}

}  // namespace wigner
