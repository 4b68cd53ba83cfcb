#pragma once

// Named test symbols with their true root structure.

#include <map>
#include <optional>

#include "toep/core.hpp"
#include "toep/precond.hpp"

namespace toep {

struct CorpusEntry {
  std::string id;
  GeneratingSymbol symbol;
  RootSpec roots;  // signs left at +1; pick them with choose_signs
  // Odd part does not vanish at pi, i.e. the periodic extension jumps there.
  bool odd_jump_at_pi = false;
};

namespace shapes {

inline double h1(double x) {
  if (x < -pi / 2) return -pi - x;
  if (x < pi / 2) return x;
  return pi - x;
}

// Same function as h1 with the closed ends of the pieces swapped.
inline double h1_alt(double x) {
  if (x <= -pi / 2) return -pi - x;
  if (x <= pi / 2) return x;
  return pi - x;
}

inline double h2(double x) {
  if (x < -0.5) return -1.0 - x;
  if (x < 0.5) return x;
  return 1.0 - x;
}

inline double h3(double x) {
  const double s = 3.0 - 2.0 * pi;
  if (x < -pi + 0.5) return x + pi;
  if (x < -0.5) return (x + 1.0) / s;
  if (x < 0.5) return -x / s;
  if (x < pi - 0.5) return (x - 1.0) / s;
  return x - pi;
}

inline double h3_alt(double x) {
  const double s = 3.0 - 2.0 * pi;
  if (x <= -pi + 0.5) return x + pi;
  if (x <= -0.5) return (x + 1.0) / s;
  if (x <= 0.5) return -x / s;
  if (x <= pi - 0.5) return (x - 1.0) / s;
  return x - pi;
}

}  // namespace shapes

inline std::vector<CorpusEntry> corpus() {
  using shapes::h1;
  using shapes::h1_alt;
  using shapes::h2;
  using shapes::h3;
  using shapes::h3_alt;
  const std::vector<double> bp_h1{-pi / 2, pi / 2, pi};
  const std::vector<double> bp_h2{-0.5, 0.5, pi};
  const std::vector<double> bp_h3{-pi + 0.5, -0.5, 0.5, pi - 0.5, pi};
  auto sym = [](std::string name, auto re, auto im, std::vector<double> bp) {
    return GeneratingSymbol{std::move(name), re, im, std::move(bp)};
  };
  std::vector<CorpusEntry> out;
  auto add = [&](GeneratingSymbol s, RootSpec r) {
    bool jump = std::abs(s.imag_part(pi)) > 1e-12;
    std::string id = s.name;
    out.push_back(CorpusEntry{std::move(id), std::move(s), std::move(r), jump});
  };
  auto zero = [](int m1, int m2) { return std::optional<ZeroRoot>(ZeroRoot{m1, m2}); };

  add(sym("f1", [](double x) { return x * x + 1.0; }, h1, bp_h1), RootSpec{});
  add(sym("f2", [](double x) { return x * x; }, [](double x) { return x * x * x; }, {pi}),
      RootSpec{zero(2, 3), {}});
  add(sym("f3", [](double x) { return x * x; }, [](double x) { return x; }, {pi}), RootSpec{zero(2, 1), {}});
  add(sym("f4", [](double x) { return x * x - 1.0; }, h2, bp_h2), RootSpec{zero(0, 1), {{1.0, 1, 1}}});
  add(sym("f5", [](double x) { return (x * x - 1.0) * (x * x - 1.0); },
          [](double x) { return x * (x * x - 4.0); }, {pi}),
      RootSpec{zero(0, 1), {{1.0, 2, 0}, {2.0, 0, 1}}});
  add(sym("f7", [](double x) { return x * x - 1.0; }, [](double x) { return x * x * x; }, {pi}),
      RootSpec{zero(0, 3), {{1.0, 1, 0}}});
  add(sym("gcar", [](double x) { return 1.0 + std::cos(2 * x) + std::cos(3 * x); },
          [](double x) { return -2.0 * std::sin(x) - std::sin(2 * x) - std::sin(3 * x); }, {}),
      RootSpec{});
  add(sym("f9", [](double x) { return (x * x - 1.0) * (x * x - 1.0); },
          [](double x) { return x * (x * x - 1.0); }, {pi}),
      RootSpec{zero(0, 1), {{1.0, 2, 1}}});
  add(sym("f10", [](double x) { return x * x - 1.0; }, h3, bp_h3), RootSpec{zero(0, 1), {{1.0, 1, 1}}});
  add(sym("f11", [](double x) { return x * x * std::sin(x) * std::sin(x) + 1.0; },
          [](double x) { return std::sin(x) * x * x; }, {pi}),
      RootSpec{});
  add(sym("f12", [](double x) { return x * x + 1.0; }, h1_alt, bp_h1), RootSpec{});
  add(sym("f13", [](double x) { return x * x + 1.0; }, [](double x) { return x; }, {pi}), RootSpec{});
  add(sym("f14", [](double x) { return x * x * (x * x - 1.0) * (x * x - 1.0); }, h3_alt, bp_h3),
      RootSpec{zero(2, 1), {{1.0, 2, 1}}});
  return out;
}

inline std::vector<std::string> corpus_ids() {
  std::vector<std::string> ids;
  for (const auto& e : corpus()) ids.push_back(e.id);
  return ids;
}

inline std::optional<CorpusEntry> find_symbol(const std::string& id) {
  for (auto& e : corpus())
    if (e.id == id || (id == "f8" && e.id == "gcar")) return e;
  return std::nullopt;
}

inline CorpusEntry corpus_entry(const std::string& id) {
  auto e = find_symbol(id);
  if (!e) throw error(errc::usage, "unknown symbol '" + id + "'");
  return *e;
}

}  // namespace toep
