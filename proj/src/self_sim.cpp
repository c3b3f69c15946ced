#include "img/self_sim.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_set>

#include "img/errors.hpp"

namespace img::selfsim {

using treeauto::compose;
using treeauto::conjugate;
using treeauto::invert;

// ---------------------------------------------------------------------------
// Words and recursion systems

Word parseWord(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    Letter l;
    if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      l.inverse = true;
      tok.resize(tok.size() - 3);
    }
    l.symbol = tok;
    w.push_back(std::move(l));
  }
  return w;
}

std::string formatWord(const Word& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += l.symbol;
    if (l.inverse) out += "^-1";
  }
  return out;
}

RecursionSystem::RecursionSystem(std::string name, std::map<std::string, Rule> rules,
                                 std::map<std::string, Word> derived)
    : name_(std::move(name)), rules_(std::move(rules)), derived_(std::move(derived)),
      memo_(std::make_shared<Memo>()) {
  auto checkWord = [&](const Word& w, const std::string& owner) {
    for (const auto& l : w)
      if (!rules_.count(l.symbol))
        throw InvalidArgument("word for '" + owner + "' uses undeclared symbol '" + l.symbol + "'");
  };
  for (const auto& [sym, rule] : rules_) {
    checkWord(rule.left, sym);
    checkWord(rule.right, sym);
  }
  for (const auto& [sym, w] : derived_) {
    if (rules_.count(sym)) throw InvalidArgument("derived word '" + sym + "' shadows a generator");
    checkWord(w, sym);
  }
}

Portrait RecursionSystem::unfold(const std::string& symbol, int level) const {
  auto it = rules_.find(symbol);
  if (it == rules_.end()) throw InvalidArgument("undeclared symbol '" + symbol + "'");
  if (level < 0) throw InvalidArgument("negative unfolding level");
  if (level == 0) return Portrait::identity(0);
  {
    std::lock_guard lock(memo_->mutex);
    if (auto m = memo_->table.find({symbol, level}); m != memo_->table.end()) return m->second;
  }
  // Level n only consults level n-1, so the recursion terminates.
  const Rule& rule = it->second;
  Portrait p = Portrait::fromSections(evaluate(rule.left, level - 1), evaluate(rule.right, level - 1), rule.swap);
  std::lock_guard lock(memo_->mutex);
  memo_->table.emplace(std::make_pair(symbol, level), p);
  return p;
}

Portrait RecursionSystem::evaluate(const Word& w, int level) const {
  Portrait p = Portrait::identity(level);
  for (const auto& l : w) {
    Portrait x = unfold(l.symbol, level);
    p = compose(p, l.inverse ? invert(x) : x);
  }
  return p;
}

Portrait RecursionSystem::element(const std::string& name, int level) const {
  if (auto it = derived_.find(name); it != derived_.end()) return evaluate(it->second, level);
  return unfold(name, level);
}

RecursionSystem builtinSystemF() {
  std::map<std::string, Rule> rules;
  rules["a1"] = Rule{{}, {}, true};
  rules["a2"] = Rule{parseWord("a3^-1"), parseWord("a2^-1"), true};
  rules["a3"] = Rule{parseWord("a2"), parseWord("a3"), false};
  std::map<std::string, Word> derived;
  derived["g1"] = parseWord("a2 a3^-1");
  derived["g2"] = parseWord("a3^-1 a2");
  derived["b1"] = parseWord("a1 a3 a1 a3^-1");
  derived["b2"] = parseWord("a3^-1 a1 a3 a1");
  return RecursionSystem("F", std::move(rules), std::move(derived));
}

RecursionSystem builtinSystemStandard() {
  std::map<std::string, Rule> rules;
  rules["binf"] = Rule{{}, {}, true};
  rules["b0"] = Rule{parseWord("binf"), {}, true};
  rules["b2"] = Rule{parseWord("b0"), parseWord("b2"), false};
  return RecursionSystem("standard", std::move(rules));
}

Portrait unfoldGenerator(const RecursionSystem& sys, const std::string& name, int level) {
  return sys.unfold(name, level);
}

// ---------------------------------------------------------------------------
// LevelGroup

LevelGroup::LevelGroup(int level, std::vector<Portrait> generators, std::vector<Portrait> elements)
    : level_(level), generators_(std::move(generators)), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  for (const auto& p : elements_)
    if (p.level() != level_) throw InvalidArgument("group element at wrong level");
}

bool LevelGroup::contains(const Portrait& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

bool LevelGroup::isSubsetOf(const LevelGroup& other) const {
  return level_ == other.level_ && std::includes(other.elements_.begin(), other.elements_.end(),
                                                 elements_.begin(), elements_.end());
}

LevelGroup closure(int level, std::span<const Portrait> gens, std::size_t cap) {
  for (const auto& g : gens)
    if (g.level() != level) throw InvalidArgument("closure generators must share one level");
  const Portrait id = Portrait::identity(level);
  std::unordered_set<Portrait> seen{id};
  std::vector<Portrait> frontier{id};
  while (!frontier.empty()) {
    std::vector<Portrait> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        Portrait y = compose(x, g);
        if (seen.insert(y).second) {
          if (seen.size() > cap)
            throw ResourceLimit("group closure exceeded the cap of " + std::to_string(cap) + " elements");
          next.push_back(y);
        }
      }
    }
    // Canonical frontier order keeps the traversal independent of hashing.
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return LevelGroup(level, std::vector<Portrait>(gens.begin(), gens.end()),
                    std::vector<Portrait>(seen.begin(), seen.end()));
}

LevelGroup closure(std::span<const Portrait> gens, std::size_t cap) {
  if (gens.empty()) throw InvalidArgument("closure of an empty generator list needs an explicit level");
  return closure(gens.front().level(), gens, cap);
}

LevelGroup trivialGroup(int level) { return LevelGroup(level, {}, {Portrait::identity(level)}); }

LevelGroup fullTreeGroup(int level) {
  if (level < 0 || level > 4) throw InvalidArgument("full enumeration of Omega_n is limited to n <= 4");
  const std::size_t bits = (std::size_t{1} << level) - 1;
  std::vector<Portrait> all;
  all.reserve(std::size_t{1} << bits);
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    std::vector<bool> b(bits);
    for (std::size_t i = 0; i < bits; ++i) b[i] = (mask >> i) & 1u;
    all.push_back(Portrait::fromBits(level, b));
  }
  // One swap per internal vertex generates everything.
  std::vector<Portrait> gens;
  for (std::size_t i = 0; i < bits; ++i) {
    std::vector<bool> b(bits);
    b[i] = true;
    gens.push_back(Portrait::fromBits(level, b));
  }
  return LevelGroup(level, std::move(gens), std::move(all));
}

LevelGroup normalClosure(const LevelGroup& g, std::span<const Portrait> seeds, std::size_t cap) {
  std::vector<Portrait> gens;
  for (const auto& s : seeds) {
    if (s.level() != g.level()) throw InvalidArgument("normal closure seed at wrong level");
    if (!s.isIdentity()) gens.push_back(s);
  }
  LevelGroup h = closure(g.level(), gens, cap);
  bool grown = true;
  while (grown) {
    grown = false;
    for (const auto& x : g.generators()) {
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Portrait c = conjugate(gens[i], x);
        if (!h.contains(c)) {
          gens.push_back(c);
          h = closure(g.level(), gens, cap);
          grown = true;
        }
      }
    }
  }
  return h;
}

LevelGroup commutatorSubgroup(const LevelGroup& g) {
  std::vector<Portrait> seeds;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) seeds.push_back(treeauto::commutator(gens[i], gens[j]));
  return normalClosure(g, seeds);
}

LevelGroup centralizer(const LevelGroup& g, const Portrait& x) {
  if (!g.contains(x)) throw InvalidArgument("centralizer: element " + treeauto::encode(x) + " not in group");
  std::vector<Portrait> out;
  for (const auto& y : g.elements())
    if (compose(x, y) == compose(y, x)) out.push_back(y);
  std::vector<Portrait> gens = out;
  return LevelGroup(g.level(), std::move(gens), std::move(out));
}

LevelGroup center(const LevelGroup& g) {
  std::vector<Portrait> out;
  for (const auto& y : g.elements()) {
    bool central = std::all_of(g.generators().begin(), g.generators().end(),
                               [&](const Portrait& x) { return compose(x, y) == compose(y, x); });
    if (central) out.push_back(y);
  }
  std::vector<Portrait> gens = out;
  return LevelGroup(g.level(), std::move(gens), std::move(out));
}

std::size_t subgroupIndex(const LevelGroup& g, const LevelGroup& h) {
  if (!h.isSubsetOf(g)) throw InvalidArgument("subgroupIndex: h is not contained in g");
  return g.order() / h.order();
}

LevelGroup intersection(const LevelGroup& h1, const LevelGroup& h2) {
  if (h1.level() != h2.level()) throw InvalidArgument("intersection: level mismatch");
  std::vector<Portrait> out;
  std::set_intersection(h1.elements().begin(), h1.elements().end(), h2.elements().begin(), h2.elements().end(),
                        std::back_inserter(out));
  LevelGroup tmp(h1.level(), {}, out);
  return LevelGroup(h1.level(), greedyGenerators(tmp), std::move(out));
}

LevelGroup restrictGroup(const LevelGroup& g, int m) {
  std::vector<Portrait> els, gens;
  for (const auto& x : g.elements()) els.push_back(treeauto::restrict(x, m));
  for (const auto& x : g.generators()) gens.push_back(treeauto::restrict(x, m));
  return LevelGroup(m, std::move(gens), std::move(els));
}

bool isAbelian(const LevelGroup& g) {
  const auto& gens = g.generators().empty() ? g.elements() : g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (compose(gens[i], gens[j]) != compose(gens[j], gens[i])) return false;
  return true;
}

bool normalizes(const Portrait& x, const LevelGroup& target) {
  const auto& gens = target.generators().empty() ? target.elements() : target.generators();
  return std::all_of(gens.begin(), gens.end(), [&](const Portrait& h) { return target.contains(conjugate(h, x)); });
}

bool isNormalIn(const LevelGroup& h, const LevelGroup& g) {
  if (!h.isSubsetOf(g)) return false;
  const auto& gens = g.generators().empty() ? g.elements() : g.generators();
  return std::all_of(gens.begin(), gens.end(), [&](const Portrait& x) { return normalizes(x, h); });
}

std::vector<Portrait> greedyGenerators(const LevelGroup& g) {
  std::vector<Portrait> gens;
  LevelGroup h = trivialGroup(g.level());
  for (const auto& x : g.elements()) {
    if (h.order() == g.order()) break;
    if (h.contains(x)) continue;
    gens.push_back(x);
    h = closure(g.level(), gens);
  }
  return gens;
}

std::vector<Portrait> conjugacyClass(const LevelGroup& g, const Portrait& x) {
  std::vector<Portrait> cls;
  for (const auto& y : g.elements()) cls.push_back(conjugate(x, y));
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  return cls;
}

std::vector<std::size_t> abelianInvariants(const LevelGroup& g) {
  const LevelGroup c = commutatorSubgroup(g);
  const std::size_t quotient = g.order() / c.order();
  auto log2 = [](std::size_t v) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < v) ++k;
    if ((std::size_t{1} << k) != v) throw VerificationFailure("abelian quotient order is not a power of two");
    return k;
  };
  const std::size_t rankTotal = log2(quotient);
  // killed[k] = log2 #{cosets xC : x^(2^k) in C}; factors of order >= 2^k
  // number killed[k] - killed[k-1].
  std::vector<std::size_t> killed{0};
  while (killed.back() < rankTotal) {
    const std::size_t k = killed.size();
    std::size_t count = 0;
    for (const auto& x : g.elements())
      if (c.contains(treeauto::power(x, 1LL << k))) ++count;
    killed.push_back(log2(count / c.order()));
  }
  std::vector<std::size_t> atLeast(killed.size() + 1, 0);
  for (std::size_t k = 1; k < killed.size(); ++k) atLeast[k] = killed[k] - killed[k - 1];
  std::vector<std::size_t> invariants;
  for (std::size_t k = 1; k < killed.size(); ++k) {
    const std::size_t exact = atLeast[k] - atLeast[k + 1];
    for (std::size_t r = 0; r < exact; ++r) invariants.push_back(std::size_t{1} << k);
  }
  return invariants;
}

std::size_t sectionPairCount(const LevelGroup& gN, const Portrait& x) {
  if (x.level() + 1 != gN.level()) throw InvalidArgument("sectionPairCount: x must live one level below the group");
  std::size_t count = 0;
  for (const auto& e : gN.elements())
    if (!e.rootSwap() && treeauto::section(e, "1") == x) ++count;
  if (count == 0)
    throw InvalidArgument("sectionPairCount: " + treeauto::encode(x) + " is not a left section of the group");
  return count;
}

GeometricData geometricData(const RecursionSystem& sys, int level) {
  if (level < 1) throw InvalidArgument("geometric data needs level >= 1");
  GeometricData d;
  d.level = level;
  const Portrait a1 = sys.unfold("a1", level), a2 = sys.unfold("a2", level), a3 = sys.unfold("a3", level);
  const std::vector<Portrait> gens{a1, a3};
  d.G = closure(level, gens);
  d.H1 = normalClosure(d.G, std::vector<Portrait>{a1});
  d.H2 = normalClosure(d.G, std::vector<Portrait>{a2});
  d.H3 = normalClosure(d.G, std::vector<Portrait>{a3});
  d.U = normalClosure(d.G, std::vector<Portrait>{sys.element("g1", level)});
  d.commutator = commutatorSubgroup(d.G);
  return d;
}

// ---------------------------------------------------------------------------
// Verification routines

namespace {

// Both descriptions of the set M for a triple at level n.
bool inMByStandardForm(const std::array<Portrait, 3>& b, treeauto::ConjugacyTester& conj) {
  const int n = b[0].level();
  const Portrait id = Portrait::identity(n - 1);
  const Portrait sigma = Portrait::sigma(n);
  return compose(compose(b[0], b[1]), b[2]).isIdentity() && conj(b[0], sigma) &&
         conj(b[1], Portrait::fromSections(treeauto::restrict(b[0], n - 1), id, true)) &&
         conj(b[2], Portrait::fromSections(treeauto::restrict(b[1], n - 1), treeauto::restrict(b[2], n - 1), false));
}

bool inMByReference(const std::array<Portrait, 3>& b, const std::array<Portrait, 3>& a,
                    treeauto::ConjugacyTester& conj) {
  return compose(compose(b[0], b[1]), b[2]).isIdentity() && conj(b[0], a[0]) && conj(b[1], a[1]) &&
         conj(b[2], a[2]);
}

std::array<Portrait, 3> referenceTriple(int level) {
  const auto sys = builtinSystemF();
  return {sys.unfold("a1", level), sys.unfold("a2", level), sys.unfold("a3", level)};
}

std::string sizeDetail(std::size_t got, std::size_t want) {
  return "got " + std::to_string(got) + ", expected " + std::to_string(want);
}

}  // namespace

Report verifyGeometricPresentation(int level, const std::optional<std::array<Portrait, 3>>& triple) {
  if (level < 1) throw InvalidArgument("presentation check needs level >= 1");
  Report r;
  r.title = "geometric presentation at level " + std::to_string(level);
  const std::array<Portrait, 3> a = triple ? *triple : referenceTriple(level);
  for (const auto& x : a)
    if (x.level() != level) throw InvalidArgument("triple at wrong level");
  treeauto::ConjugacyTester conj;
  const Portrait sigma = Portrait::sigma(level);
  const Portrait idBelow = Portrait::identity(level - 1);

  r.add("a1~sigma", "a1 is conjugate to sigma", conj(a[0], sigma));
  r.add("a2~(a1,id)sigma", "a2 is conjugate to (a1, id) sigma",
        conj(a[1], Portrait::fromSections(treeauto::restrict(a[0], level - 1), idBelow, true)));
  r.add("a3~(a2,a3)", "a3 is conjugate to (a2, a3) rebuilt from sections",
        conj(a[2], Portrait::fromSections(treeauto::restrict(a[1], level - 1), treeauto::restrict(a[2], level - 1),
                                          false)));
  r.add("a1a2a3=id", "a1 a2 a3 is the identity", compose(compose(a[0], a[1]), a[2]).isIdentity());

  const auto std = builtinSystemStandard();
  r.add("standard-form", "a1, a2, a3 are conjugate to binf, b0, b2",
        conj(a[0], std.unfold("binf", level)) && conj(a[1], std.unfold("b0", level)) &&
            conj(a[2], std.unfold("b2", level)));

  // M is closed under conjugation: all of Omega_n for n <= 3, a fixed sample beyond.
  std::vector<Portrait> conjugators;
  if (level <= 3) {
    conjugators = fullTreeGroup(level).elements();
  } else {
    std::mt19937_64 rng(0x5eed0000u + static_cast<unsigned>(level));
    for (int i = 0; i < 64; ++i) conjugators.push_back(treeauto::randomPortrait(level, rng));
  }
  const bool base = inMByStandardForm(a, conj);
  bool closed = true;
  bool agree = true;
  for (const auto& beta : conjugators) {
    const std::array<Portrait, 3> b{conjugate(a[0], beta), conjugate(a[1], beta), conjugate(a[2], beta)};
    const bool first = inMByStandardForm(b, conj);
    const bool second = inMByReference(b, a, conj);
    closed = closed && first == base;
    agree = agree && first == second;
  }
  r.add("M-closed", "the triple set M is closed under conjugation by Omega", base && closed,
        std::to_string(conjugators.size()) + " conjugators");
  r.add("M-characterizations", "both descriptions of M agree on conjugated triples", agree);
  return r;
}

Report verifyTripleTheorem(int level) {
  if (level < 1 || level > 3) throw InvalidArgument("triple theorem search is limited to levels 1..3");
  Report r;
  r.title = "simultaneous conjugacy at level " + std::to_string(level);
  const auto a = referenceTriple(level);
  const LevelGroup omega = fullTreeGroup(level);
  const std::vector<Portrait> gens{a[0], a[2]};
  const LevelGroup g = closure(level, gens);

  std::array<std::unordered_set<Portrait>, 3> gClass;
  for (int i = 0; i < 3; ++i)
    for (const auto& x : conjugacyClass(g, a[i])) gClass[i].insert(x);
  std::array<Portrait, 3> key;
  for (int i = 0; i < 3; ++i) key[i] = treeauto::conjugacyClassKey(a[i]);

  treeauto::ConjugacyTester conj;
  std::size_t qualifying = 0, witnessed = 0, disagreements = 0;
  const bool identityWitness = gClass[0].count(a[0]) && gClass[1].count(a[1]) && gClass[2].count(a[2]);
  for (const auto& b1 : omega.elements()) {
    for (const auto& b2 : omega.elements()) {
      const std::array<Portrait, 3> b{b1, b2, invert(compose(b1, b2))};
      const bool viaKeys = treeauto::conjugacyClassKey(b1) == key[0] && treeauto::conjugacyClassKey(b2) == key[1] &&
                           treeauto::conjugacyClassKey(b[2]) == key[2];
      const bool viaStandard = inMByStandardForm(b, conj);
      if (viaKeys != viaStandard) ++disagreements;
      if (!viaKeys) continue;
      ++qualifying;
      // b_i = beta g_i a_i g_i^-1 beta^-1  <=>  beta^-1 b_i beta lies in the G-class of a_i.
      for (const auto& beta : omega.elements()) {
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i) ok = gClass[i].count(conjugate(b[i], beta)) != 0;
        if (ok) {
          ++witnessed;
          break;
        }
      }
    }
  }
  r.add("witnesses", "every qualifying triple admits beta in Omega and g_i in G", qualifying == witnessed,
        std::to_string(witnessed) + "/" + std::to_string(qualifying) + " triples");
  r.add("M-characterizations", "the two descriptions of M agree on all pairs (b1, b2)", disagreements == 0,
        std::to_string(disagreements) + " disagreements over " + std::to_string(omega.order() * omega.order()) +
            " pairs");
  r.add("reference-triple", "(a1, a2, a3) itself is witnessed with beta = id", identityWitness);
  return r;
}

Report verifyGeometricStructure(int n) {
  if (n < 3) throw InvalidArgument("structure checks need level >= 3");
  const auto sys = builtinSystemF();
  const GeometricData d = geometricData(sys, n);
  const GeometricData below = geometricData(sys, n - 1);
  const Portrait a1 = sys.unfold("a1", n), a2 = sys.unfold("a2", n), a3 = sys.unfold("a3", n);
  const std::string lv = "[n=" + std::to_string(n) + "]";
  Report r;
  r.title = "geometric group structure at level " + std::to_string(n);

  r.add("order", "|G_n| = 2^(n+2) " + lv, d.G.order() == (std::size_t{1} << (n + 2)),
        sizeDetail(d.G.order(), std::size_t{1} << (n + 2)));
  r.add("index-H1", "[G_n : H1] = 4 " + lv, subgroupIndex(d.G, d.H1) == 4);
  r.add("index-H2", "[G_n : H2] = 2 " + lv, subgroupIndex(d.G, d.H2) == 2);
  r.add("index-H3", "[G_n : H3] = 2 " + lv, subgroupIndex(d.G, d.H3) == 2);
  r.add("index-U", "[G_n : U_n] = 4 " + lv, subgroupIndex(d.G, d.U) == 4);
  r.add("index-comm", "[G_n : [G_n,G_n]] = 8 " + lv, subgroupIndex(d.G, d.commutator) == 8);
  r.add("comm=H1&H3", "[G_n,G_n] = H1 n H3 " + lv, d.commutator == intersection(d.H1, d.H3));

  std::vector<Portrait> inversePairs;
  for (const auto& x : below.U.elements())
    inversePairs.push_back(Portrait::fromSections(x, invert(x), false));
  r.add("comm=inverse-pairs", "[G_n,G_n] = {(x, x^-1) : x in U_(n-1)} " + lv,
        d.commutator == LevelGroup(n, {}, inversePairs));

  r.add("U-abelian", "U_n is abelian " + lv, isAbelian(d.U));
  const std::vector<Portrait> gammas{sys.element("g1", n), sys.element("g2", n)};
  r.add("U-generators", "U_n = <g1, g2> = normal closure of g1 " + lv, closure(n, gammas) == d.U);
  const std::vector<Portrait> betas{sys.element("b1", n), sys.element("b2", n)};
  r.add("comm-generators", "[G_n,G_n] = <b1, b2> " + lv, closure(n, betas) == d.commutator);

  bool quotientAbelian = true;
  for (const auto& x : d.G.generators())
    for (const auto& y : d.G.elements()) quotientAbelian = quotientAbelian && d.commutator.contains(treeauto::commutator(x, y));
  r.add("comm-quotient-abelian", "G_n / [G_n,G_n] is abelian " + lv, quotientAbelian);

  const auto inv = abelianInvariants(d.G);
  r.add("abelianization", "G_n^ab = Z/2 x Z/4 " + lv, inv == std::vector<std::size_t>{2, 4});

  r.add("centralizer-a1", "|C(a1)| = 8 " + lv, centralizer(d.G, a1).order() == 8);
  r.add("centralizer-a2", "|C(a2)| = 8 " + lv, centralizer(d.G, a2).order() == 8);
  const LevelGroup ca3 = centralizer(d.G, a3);
  r.add("centralizer-a3", "|C(a3)| = 8 " + lv, ca3.order() == 8);
  r.add("centralizer-a3-in-U", "|C(a3) n U_n| <= 2 " + lv, intersection(ca3, d.U).order() <= 2);

  const LevelGroup z = center(d.G);
  bool meetsA3Trivially = true;
  for (int k = 1; k < 4; ++k) meetsA3Trivially = meetsA3Trivially && !z.contains(treeauto::power(a3, k));
  r.add("center-vs-a3", "Z(G_n) meets <a3> trivially " + lv, meetsA3Trivially,
        "|Z(G_n)| = " + std::to_string(z.order()));

  // {u v^-1 : (u, v)t in G_n} = U_(n-1)
  std::vector<Portrait> ratios;
  for (const auto& e : d.G.elements())
    ratios.push_back(compose(treeauto::section(e, "1"), invert(treeauto::section(e, "2"))));
  r.add("U-as-ratios", "{u v^-1 : (u,v)t in G_n} = U_(n-1) " + lv, LevelGroup(n - 1, {}, ratios) == below.U);

  bool inversePairCriterion = true;
  for (const auto& x : below.G.elements()) {
    const bool inG = d.G.contains(Portrait::fromSections(x, invert(x), false));
    inversePairCriterion = inversePairCriterion && inG == below.U.contains(x);
  }
  r.add("inverse-pair", "(x, x^-1) in G_n iff x in U_(n-1) " + lv, inversePairCriterion);

  if (n <= 5) {
    const auto cls = conjugacyClass(d.G, a2);
    const std::unordered_set<Portrait> a2Class(cls.begin(), cls.end());
    bool all = true;
    for (const auto& g : d.G.elements())
      all = all && a2Class.count(compose(compose(a1, g), compose(invert(a3), invert(g)))) != 0;
    r.add("a2-conjugates", "a1 g a3^-1 g^-1 is G-conjugate to a2 for all g " + lv, all);
  }

  auto productSize = [](const LevelGroup& x, const LevelGroup& y) {
    return x.order() * y.order() / intersection(x, y).order();
  };
  r.add("G=HiHj", "G_n = H1 H3 = H1 H2 = H2 H3 " + lv,
        productSize(d.H1, d.H3) == d.G.order() && productSize(d.H1, d.H2) == d.G.order() &&
            productSize(d.H2, d.H3) == d.G.order());

  if (n >= 4) {
    const bool allEven = std::all_of(d.G.elements().begin(), d.G.elements().end(),
                                     [](const Portrait& g) { return treeauto::sign(g, 4) == 1; });
    r.add("sign4", "sgn_4 = +1 on G_n " + lv, allEven);
    bool unique = true;
    for (const auto& x : below.G.elements()) unique = unique && sectionPairCount(d.G, x) == 1;
    r.add("unique-section", "each x in G_(n-1) has a unique y with (x, y) in G_n " + lv, unique);
  }

  const bool noOdometer = std::none_of(d.G.elements().begin(), d.G.elements().end(),
                                       [](const Portrait& g) { return treeauto::isLevelOdometer(g); });
  r.add("no-odometer", "G_n has no level-n odometer " + lv, noOdometer);
  return r;
}

}  // namespace img::selfsim
