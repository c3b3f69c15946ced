#include "img/arith_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "img/errors.hpp"

namespace img::arithmodel {

using selfsim::closure;
using treeauto::compose;
using treeauto::invert;

namespace {

std::size_t log2Exact(std::size_t v) {
  const auto k = static_cast<std::size_t>(std::countr_zero(v));
  if ((std::size_t{1} << k) != v) throw VerificationFailure("order " + std::to_string(v) + " is not a power of two");
  return k;
}

// Verifies that `elements` is a group; returns it with a small generating set.
LevelGroup asVerifiedGroup(int level, std::vector<Portrait> elements) {
  LevelGroup set(level, {}, std::move(elements));
  std::vector<Portrait> gens;
  LevelGroup h = selfsim::trivialGroup(level);
  bool closed = set.contains(Portrait::identity(level));
  for (const auto& x : set.elements()) {
    if (!closed || h.order() == set.order()) break;
    if (h.contains(x)) continue;
    gens.push_back(x);
    try {
      h = closure(level, gens, 4 * set.order());
    } catch (const ResourceLimit&) {
      closed = false;
      break;
    }
    closed = h.isSubsetOf(set);
  }
  if (!closed || !(h == set)) {
    for (const auto& x : set.elements())
      for (const auto& y : set.elements())
        if (!set.contains(compose(x, y)))
          throw ModelConstructionError("model at level " + std::to_string(level) + " is not closed: " +
                                       treeauto::encode(x) + " * " + treeauto::encode(y) + " leaves the set");
    throw ModelConstructionError("model at level " + std::to_string(level) + " lacks the identity");
  }
  return LevelGroup(level, std::move(gens), set.elements());
}

// Coordinates of every element of g in g / Frattini(g) with respect to a
// basis picked greedily in canonical order.
struct FrattiniQuotient {
  LevelGroup frattini;
  std::size_t rank = 0;
  std::unordered_map<Portrait, std::size_t> coordinate;
};

FrattiniQuotient frattiniQuotient(const LevelGroup& g) {
  FrattiniQuotient q;
  q.frattini = frattiniSubgroup(g);
  std::vector<Portrait> basis;
  std::vector<Portrait> spanGens = q.frattini.generators();
  LevelGroup span = q.frattini;
  for (const auto& x : g.elements()) {
    if (span.order() == g.order()) break;
    if (span.contains(x)) continue;
    basis.push_back(x);
    spanGens.push_back(x);
    span = closure(g.level(), spanGens);
  }
  q.rank = basis.size();
  if ((std::size_t{1} << q.rank) * q.frattini.order() != g.order())
    throw VerificationFailure("Frattini quotient is not elementary abelian");
  for (std::size_t c = 0; c < (std::size_t{1} << q.rank); ++c) {
    Portrait rep = Portrait::identity(g.level());
    for (std::size_t i = 0; i < q.rank; ++i)
      if ((c >> i) & 1u) rep = compose(rep, basis[i]);
    for (const auto& phi : q.frattini.elements()) q.coordinate[compose(rep, phi)] = c;
  }
  if (q.coordinate.size() != g.order()) throw VerificationFailure("Frattini cosets do not partition the group");
  return q;
}

ArithLevelModel finishModel(int level, LevelGroup m, LevelGroup g, LevelGroup u, ModelStats stats) {
  ArithLevelModel model;
  model.level = level;
  model.M = std::move(m);
  model.G = std::move(g);
  model.U = std::move(u);
  model.stats = stats;
  model.frattini = frattiniSubgroup(model.M);
  model.maximalSubgroups = maximalSubgroups(model.M);
  return model;
}

}  // namespace

std::vector<ArithLevelModel> buildModelChain(int n, const ModelOptions& options) {
  if (n < 1 || n > 6) throw InvalidArgument("model level must lie in 1..6, got " + std::to_string(n));
  if (n > options.levelCap) throw ResourceLimit("model level " + std::to_string(n) + " exceeds the configured cap " +
                                                std::to_string(options.levelCap));
  if (n == 6 && !options.allowLevel6) throw ResourceLimit("model level 6 must be enabled explicitly");

  const auto sys = selfsim::builtinSystemF();
  std::vector<ArithLevelModel> chain;
  selfsim::GeometricData geo = selfsim::geometricData(sys, 1);
  {
    const Portrait s = Portrait::sigma(1);
    ModelStats stats{2, 2, 2, 2};
    chain.push_back(finishModel(1, closure(1, std::vector<Portrait>{s}), geo.G, geo.U, stats));
  }
  for (int k = 2; k <= n; ++k) {
    const ArithLevelModel& prev = chain.back();
    selfsim::GeometricData cur = selfsim::geometricData(sys, k);
    ModelStats stats;
    std::vector<Portrait> accepted;
    for (const auto& x : prev.M.elements()) {
      const Portrait xInv = invert(x);
      for (const auto& y : prev.M.elements()) {
        stats.candidates += 2;
        if (!prev.U.contains(compose(y, xInv))) continue;
        for (bool swap : {false, true}) {
          ++stats.passRatio;
          const Portrait c = Portrait::fromSections(x, y, swap);
          if (!selfsim::normalizes(c, cur.G)) continue;
          ++stats.passNormalizeG;
          if (!selfsim::normalizes(c, cur.U)) continue;
          ++stats.passNormalizeU;
          accepted.push_back(c);
        }
      }
    }
    LevelGroup m = asVerifiedGroup(k, std::move(accepted));
    chain.push_back(finishModel(k, std::move(m), std::move(cur.G), std::move(cur.U), stats));
  }
  return chain;
}

ArithLevelModel buildModel(int n, const ModelOptions& options) { return buildModelChain(n, options).back(); }

Report bruteNormalizerCrossCheck(int n) {
  if (n < 1 || n > 4) throw InvalidArgument("normalizer sweep is limited to levels 1..4");
  const auto chain = buildModelChain(n);
  const ArithLevelModel& model = chain.back();
  const LevelGroup omega = selfsim::fullTreeGroup(n);
  std::vector<Portrait> normalizer;
  for (const auto& c : omega.elements())
    if (selfsim::normalizes(c, model.G)) normalizer.push_back(c);
  const LevelGroup N(n, {}, normalizer);

  Report r;
  r.title = "normalizer sweep at level " + std::to_string(n);
  r.add("M-in-normalizer", "M_n lies in the normalizer of G_n in Omega_n", model.M.isSubsetOf(N),
        "|N| = " + std::to_string(N.order()) + ", |M_n| = " + std::to_string(model.M.order()));
  r.add("G-in-M", "G_n lies in M_n", model.G.isSubsetOf(model.M));
  bool constraints = true;
  if (n >= 2) {
    const ArithLevelModel& prev = chain[chain.size() - 2];
    for (const auto& e : model.M.elements()) {
      const Portrait x = treeauto::section(e, "1"), y = treeauto::section(e, "2");
      constraints = constraints && prev.M.contains(x) && prev.M.contains(y) &&
                    prev.U.contains(compose(y, invert(x))) && selfsim::normalizes(e, model.U);
    }
  }
  r.add("section-constraints", "every element of M_n has sections in M_(n-1) with ratio in U_(n-1)", constraints);
  if (n == 1) r.add("level-1", "N = Omega_1 = M_1", N == omega && model.M == omega);
  return r;
}

LevelGroup frattiniSubgroup(const LevelGroup& g) {
  std::vector<Portrait> seeds;
  for (const auto& x : g.elements()) {
    Portrait sq = compose(x, x);
    if (!sq.isIdentity()) seeds.push_back(sq);
  }
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) seeds.push_back(treeauto::commutator(gens[i], gens[j]));
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  LevelGroup phi = selfsim::normalClosure(g, seeds);
  return LevelGroup(g.level(), selfsim::greedyGenerators(phi), phi.elements());
}

std::vector<LevelGroup> indexTwoSubgroupsByHomomorphisms(const LevelGroup& g) {
  const std::vector<Portrait> gens = selfsim::greedyGenerators(g);
  if (gens.size() > 16) throw ResourceLimit("too many generators for homomorphism enumeration");
  std::vector<LevelGroup> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << gens.size()); ++mask) {
    std::unordered_map<Portrait, int> label;
    const Portrait id = Portrait::identity(g.level());
    label[id] = 0;
    std::deque<Portrait> queue{id};
    bool consistent = true;
    while (!queue.empty() && consistent) {
      const Portrait x = queue.front();
      queue.pop_front();
      const int lx = label[x];
      for (std::size_t j = 0; j < gens.size(); ++j) {
        const Portrait y = compose(x, gens[j]);
        const int ly = lx ^ static_cast<int>((mask >> j) & 1u);
        auto [it, inserted] = label.emplace(y, ly);
        if (inserted)
          queue.push_back(y);
        else if (it->second != ly) {
          consistent = false;
          break;
        }
      }
    }
    if (!consistent) continue;
    std::vector<Portrait> kernel;
    for (const auto& [x, l] : label)
      if (l == 0) kernel.push_back(x);
    out.emplace_back(g.level(), std::vector<Portrait>{}, std::move(kernel));
  }
  std::sort(out.begin(), out.end(),
            [](const LevelGroup& a, const LevelGroup& b) { return a.elements() < b.elements(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LevelGroup frattiniByIndexTwoSubgroups(const LevelGroup& g) {
  LevelGroup acc = g;
  for (const auto& h : indexTwoSubgroupsByHomomorphisms(g)) acc = LevelGroup(g.level(), {}, selfsim::intersection(acc, h).elements());
  return acc;
}

std::size_t frattiniRank(const LevelGroup& g) { return log2Exact(g.order() / frattiniSubgroup(g).order()); }

std::vector<LevelGroup> maximalSubgroups(const LevelGroup& g) {
  const FrattiniQuotient q = frattiniQuotient(g);
  std::vector<LevelGroup> out;
  for (std::size_t chi = 1; chi < (std::size_t{1} << q.rank); ++chi) {
    std::vector<Portrait> kernel;
    for (const auto& x : g.elements())
      if (std::popcount(q.coordinate.at(x) & chi) % 2 == 0) kernel.push_back(x);
    LevelGroup h(g.level(), {}, std::move(kernel));
    out.emplace_back(g.level(), selfsim::greedyGenerators(h), h.elements());
  }
  return out;
}

std::set<CycleType> cycleTypeTable(const LevelGroup& g) {
  std::set<CycleType> table;
  for (const auto& x : g.elements()) table.insert(treeauto::cycleType(x));
  return table;
}

std::string maximalSubgroupName(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "Mmax-%02zu", i + 1);
  return buf;
}

GrowthReport orderGrowthReport(int nmax, const ModelOptions& options) {
  return growthReport(buildModelChain(nmax, options));
}

GrowthReport growthReport(const std::vector<ArithLevelModel>& chain) {
  GrowthReport out;
  out.checks.title = "order growth of the arithmetic model";
  for (const auto& m : chain) {
    GrowthRow row;
    row.level = m.level;
    row.orderG = m.G.order();
    row.orderM = m.M.order();
    row.bound = std::size_t{1} << (2 * m.level);
    row.dimensionRatio = std::log2(static_cast<double>(row.orderM)) / static_cast<double>((1u << m.level) - 1);
    out.rows.push_back(row);
  }
  bool bounded = true, stepBounded = true, decreasing = true;
  std::string stepDetail;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto& row = out.rows[i];
    bounded = bounded && row.orderM <= row.bound;
    if (i > 0) {
      const bool ok = row.orderM <= 4 * out.rows[i - 1].orderM;
      if (!ok)
        stepDetail += (stepDetail.empty() ? "" : "; ") + std::string("level ") + std::to_string(row.level) +
                      " grows by " + std::to_string(row.orderM / out.rows[i - 1].orderM);
      stepBounded = stepBounded && ok;
    }
    if (row.level >= 4 && i > 0) decreasing = decreasing && row.dimensionRatio < out.rows[i - 1].dimensionRatio;
  }
  out.checks.add("bound-2^2n", "|M_n| <= 2^(2n)", bounded);
  out.checks.add("step-bound", "|M_n| <= 4 |M_(n-1)|", stepBounded, stepDetail);
  out.checks.add("dimension-decreasing", "log2|M_n| / (2^n - 1) decreases for n >= 3", decreasing);
  return out;
}

Report verifyModelProperties(const ArithLevelModel& model, const ArithLevelModel* below) {
  const int n = model.level;
  const std::string lv = "[n=" + std::to_string(n) + "]";
  Report r;
  r.title = "arithmetic model properties at level " + std::to_string(n);
  r.add("G-in-M", "G_n lies in M_n " + lv, model.G.isSubsetOf(model.M));
  r.add("order-bound", "|M_n| <= 2^(2n) " + lv, model.M.order() <= (std::size_t{1} << (2 * n)),
        "|M_n| = " + std::to_string(model.M.order()));
  if (n >= 3)
    r.add("no-odometer", "M_n contains no level-n odometer " + lv,
          std::none_of(model.M.elements().begin(), model.M.elements().end(),
                       [](const Portrait& x) { return treeauto::isLevelOdometer(x); }));
  const LevelGroup comm = selfsim::commutatorSubgroup(model.G);
  r.add("U-normal", "U_n is normal in M_n " + lv, selfsim::isNormalIn(model.U, model.M));
  r.add("comm-normal", "[G_n,G_n] is normal in M_n " + lv, selfsim::isNormalIn(comm, model.M));
  r.add("sigma", "sigma lies in M_n " + lv, model.M.contains(Portrait::sigma(n)));
  bool dropSwap = true;
  for (const auto& e : model.M.elements())
    if (e.rootSwap())
      dropSwap = dropSwap && model.M.contains(compose(e, Portrait::sigma(n)));
  r.add("drop-swap", "(x,y)sigma in M_n implies (x,y) in M_n " + lv, dropSwap);
  if (below != nullptr && n >= 4) {
    std::size_t worst = 0;
    std::unordered_set<Portrait> lefts;
    for (const auto& e : model.M.elements())
      if (!e.rootSwap()) lefts.insert(treeauto::section(e, "1"));
    for (const auto& x : lefts) {
      std::size_t count = 0;
      for (const auto& rho : below->U.elements())
        if (model.M.contains(Portrait::fromSections(x, compose(rho, x), false))) ++count;
      worst = std::max(worst, count);
    }
    r.add("section-multiplicity", "#{rho in U_(n-1) : (x, rho x) in M_n} <= 2 " + lv, worst <= 2,
          "max " + std::to_string(worst));
  }
  return r;
}

}  // namespace img::arithmodel
