// Maximizes 2z - x + 1 over the parity triangle and prints the certified
// result, then brackets the optimum.

#include <iostream>

#include "mixopt/mixopt.hpp"

int main() {
  using namespace mixopt;
  Instance inst = make_parity_instance();
  const Polynomial f = inst.objective + Rat(1);

  const Solution s = fptas_maximize(inst.P, f, Rat(1, 2));
  std::cout << "value " << s.value << " at x = " << s.point.x[0] << ", z = " << s.point.z[0]
            << " on the 1/" << s.grid->m << " grid\n";

  const UpperBound ub = upper_bound(inst.P, f, Rat(1, 5));
  std::cout << "optimum <= " << ub.u << "\n";
}
