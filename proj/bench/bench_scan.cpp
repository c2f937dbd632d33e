// Timing of the serial reference profile against the fast kernels on the
// pinned windows. Usage: bench_scan [repeats] [--large]
// --large adds the height 4 rational window, about two minutes serially.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "valdetect/scan.hpp"

using namespace valdetect;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = 3;
  bool large = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--large") large = true;
    else repeats = std::max(1, std::atoi(argv[i]));
  }
  struct Case {
    const char* field;
    std::vector<std::string> gens;
    Height h;
  };
  std::vector<Case> cases{{"ratfunc(gf:7,u)", {"u", "u-3"}, Height{{3}}},
                                {"laurent(gf:7,t,prec=8)", {"t", "c3"}, Height{{8}}},
                                {"laurent(ratfunc(gf:7,u),t,prec=8)", {"t", "u", "u-3"}, Height{{2}}},
                                {"laurent(laurent(gf:7,s,prec=8),t,prec=8)", {"t", "s", "c3"}, Height{{4}}}};
  if (large) cases.push_back({"ratfunc(gf:7,u)", {"u", "u-3"}, Height{{4}}});
  std::cout << std::left << std::setw(44) << "field" << std::setw(8) << "height" << std::right << std::setw(10)
            << "slots" << std::setw(12) << "serial s" << std::setw(12) << "fast s" << std::setw(10) << "speedup"
            << "  agree\n";
  for (const auto& c : cases) {
    const Window w(Field::parse(c.field), Level(3, 1), c.gens);
    Profile s, f;
    const double ts = best_of(repeats, [&] { s = profile_serial(w, c.h, 1); });
    const double tf = best_of(repeats, [&] { f = profile_fast(w, c.h, 1); });
    const bool agree = s.pairs == f.pairs && s.first_class == f.first_class;
    std::cout << std::left << std::setw(44) << c.field << std::setw(8) << c.h.to_string() << std::right
              << std::setw(10) << s.slots << std::setw(12) << std::fixed << std::setprecision(4) << ts
              << std::setw(12) << tf << std::setw(9) << std::setprecision(1) << ts / tf << "x  "
              << (agree ? "yes" : "NO") << "\n";
    if (!agree) return 1;
  }
  return 0;
}
