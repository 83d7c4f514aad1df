#include "pde2ode/initial_data.hpp"

#include "pde2ode/error.hpp"

#include <algorithm>
#include <functional>

namespace pde2ode {
namespace {

bool dominates(const std::vector<int>& a, const std::vector<int>& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (a[i] < g[i]) return false;
  return true;
}

}  // namespace

bool Staircase::is_principal(const Derivative& d) const {
  if (static_cast<std::size_t>(d.dep) >= generators.size()) return false;
  for (const auto& g : generators[static_cast<std::size_t>(d.dep)])
    if (dominates(d.idx, g)) return true;
  return false;
}

Staircase leading_set(const RifForm& f) {
  Staircase s;
  s.n_indep = f.signature.n_indep();
  s.generators.resize(f.signature.n_dep());
  for (const auto& r : f.rules) {
    auto& gens = s.generators.at(static_cast<std::size_t>(r.lead.dep));
    bool redundant = false;
    for (const auto& g : gens) redundant = redundant || dominates(r.lead.idx, g);
    if (redundant) continue;
    std::erase_if(gens, [&](const std::vector<int>& g) { return dominates(g, r.lead.idx); });
    gens.push_back(r.lead.idx);
  }
  for (auto& gens : s.generators) std::sort(gens.begin(), gens.end(), std::greater<>());
  return s;
}

bool is_finite_dimensional(const Staircase& s) {
  if (s.generators.empty()) return false;
  for (const auto& gens : s.generators) {
    for (std::size_t i = 0; i < s.n_indep; ++i) {
      bool pure = false;
      for (const auto& g : gens) {
        bool axis = true;
        for (std::size_t j = 0; j < s.n_indep && axis; ++j)
          if (j != i && g[j] != 0) axis = false;
        pure = pure || axis;
      }
      if (!pure) return false;
    }
  }
  return true;
}

InitialData parametric_derivatives(const RifForm& f) {
  Staircase s = leading_set(f);
  if (!is_finite_dimensional(s)) throw Error(ErrorCode::Infinite, "the solution space is not finite-dimensional");
  InitialData id;
  const std::size_t n = s.n_indep;
  for (std::size_t dep = 0; dep < s.generators.size(); ++dep) {
    std::vector<int> bound(n, 0);
    for (const auto& g : s.generators[dep]) {
      int ord = 0;
      for (int v : g) ord += v;
      for (std::size_t i = 0; i < n; ++i)
        if (g[i] == ord) bound[i] = std::max(bound[i], ord);
    }
    std::vector<int> idx(n, 0);
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
      if (i == n) {
        Derivative d(static_cast<int>(dep), idx);
        if (!s.is_principal(d)) id.parametric.push_back(d);
        return;
      }
      for (int k = 0; k < bound[i]; ++k) {
        idx[i] = k;
        walk(i + 1);
      }
      idx[i] = 0;
    };
    walk(0);
  }
  std::sort(id.parametric.begin(), id.parametric.end(),
            [&](const Derivative& a, const Derivative& b) { return listing_less(a, b, f.ranking); });
  for (const auto& name : f.signature.indep_names) id.point_symbols.push_back(name + "_0");
  for (std::size_t k = 1; k <= id.parametric.size(); ++k) id.constants.push_back("C_" + std::to_string(k));
  return id;
}

std::vector<DiffPolynomial> constraints_among_parametric(const RifForm& f, const InitialData& id) {
  std::vector<DiffPolynomial> out;
  for (const auto& c : f.constraints) {
    bool only_parametric = true;
    for (const auto& d : c.derivatives())
      only_parametric = only_parametric &&
                        std::find(id.parametric.begin(), id.parametric.end(), d) != id.parametric.end();
    if (only_parametric) out.push_back(c);
  }
  return out;
}

}  // namespace pde2ode
