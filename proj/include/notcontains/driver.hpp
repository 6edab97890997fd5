#pragma once

// End-to-end decision procedure: cheap checks, normalization, per-disjunct
// easy fragments, two-sided stripping, guess frames with flat
// underapproximations of non-flat haystack variables, flat solving, and
// verified model reconstruction.

#include <future>
#include <ostream>
#include <sstream>
#include <tuple>

#include "notcontains/classify.hpp"
#include "notcontains/flatsolver.hpp"
#include "notcontains/gamma.hpp"
#include "notcontains/oracle.hpp"
#include "notcontains/refute.hpp"
#include "notcontains/twosided.hpp"

namespace notcontains {

struct BoundsProfile {
  double factor = 1.0;  // 1.0 with paper == true means the exact formulas
  bool paper = true;

  static BoundsProfile parse(const std::string& text) {
    if (text == "paper") return {};
    if (text.rfind("scaled:", 0) == 0) {
      std::size_t used = 0;
      double f = 0;
      try {
        f = std::stod(text.substr(7), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size() - 7 || !(f > 0.0) || f > 1.0) {
        throw Error("bounds profile factor must be in (0, 1]: '" + text + "'");
      }
      return {f, false};
    }
    throw Error("unknown bounds profile '" + text + "' (expected paper or scaled:F)");
  }

  std::string name() const {
    if (paper) return "paper";
    std::ostringstream s;
    s << "scaled:" << factor;
    return s.str();
  }

  Bounds apply(const Bounds& b) const { return paper ? b : b.scaled(factor); }
};

struct Config {
  BoundsProfile profile;
  std::size_t iter_bound = 8;
  std::size_t max_paths = 100000;
  std::size_t pattern_cap = 50000;
  std::size_t normalization_cap = 4096;
  std::size_t max_checks = 2'000'000;
  std::size_t probe_bound = 3;
  std::size_t probe_cap = 20000;
  bool probe = true;
  bool refutation = true;
  std::size_t time_limit_ms = 0;
  std::size_t workers = 1;
  std::ostream* trace = nullptr;
};

struct Stats {
  std::size_t disjuncts = 0;
  std::size_t frames = 0;
  std::size_t paths = 0;
  std::size_t patterns = 0;
  std::size_t checks = 0;

  Stats& operator+=(const Stats& o) {
    disjuncts += o.disjuncts;
    frames += o.frames;
    paths += o.paths;
    patterns += o.patterns;
    checks += o.checks;
    return *this;
  }
};

struct Verdict {
  Status status = Status::Unknown;
  Assignment model;
  std::string reason;
  Stats stats;
};

namespace detail {

class Tracer {
 public:
  explicit Tracer(std::ostream* out) : out_(out) {}
  template <typename... Args>
  void operator()(const Args&... args) const {
    if (!out_) return;
    std::ostringstream line;
    (line << ... << args);
    *out_ << line.str() << '\n';
  }

 private:
  std::ostream* out_;
};

inline Dfa at_least_length(const Dfa& dfa, std::size_t n, std::size_t base_letters) {
  Nfa nfa;
  for (std::size_t i = 0; i <= n; ++i) nfa.add_state();
  for (State i = 0; i <= n; ++i) {
    for (Symbol a = 0; a < base_letters; ++a) nfa.add_transition(i, a, std::min<State>(i + 1, static_cast<State>(n)));
  }
  nfa.add_initial(0);
  nfa.set_final(static_cast<State>(n));
  auto longer = canonical_dfa(nfa);
  auto r = intersect(dfa, *longer);
  return r ? *r : Dfa{};
}

// Per-disjunct search state.
class DisjunctSolver {
 public:
  DisjunctSolver(const Instance& inst, const Config& cfg, const Deadline& deadline, Stats& stats)
      : inst_(inst), cfg_(cfg), deadline_(deadline), stats_(stats), trace_(cfg.trace) {}

  /// Outcome with a model of the disjunct instance.
  Outcome run() {
    if (cfg_.refutation) {
      if (auto o = refute(inst_)) return *o;
    }
    auto cls = classify(inst_);
    trace_("  fragment: ", to_string(cls.fragment));
    if (cls.model) return Outcome::sat(*cls.model);

    stripped_ = strip_two_sided(inst_);
    const Instance& s = stripped_.inst;
    if (!stripped_.plan.empty()) trace_("  stripped ", stripped_.plan.size(), " two-sided variable(s)");
    auto lifted = [&](Outcome o) {
      if (o.status == Status::Sat) o.model = lift_model(inst_, stripped_.plan, o.model);
      return o;
    };
    if (s.occurring_vars().empty()) {
      bool holds = !is_factor(evaluate(s.needle, {}), evaluate(s.haystack, {}));
      return holds ? lifted(Outcome::sat({})) : Outcome::unsat();
    }
    if (cfg_.refutation) {
      if (auto o = refute(s)) return lifted(*o);
    }
    auto cls2 = classify(s);
    if (cls2.model) return lifted(Outcome::sat(*cls2.model));
    if (cls2.fragment == Fragment::EasyAllFlat) {
      FlatStats fs;
      auto o = solve_flat(to_flat_instance(s), flat_options(), &fs);
      stats_.checks += fs.checks;
      return lifted(o);
    }
    return lifted(solve_frames(s));
  }

 private:
  FlatOptions flat_options() const { return {cfg_.iter_bound, cfg_.max_checks, deadline_}; }

  std::optional<Outcome> refute(const Instance& inst) const {
    if (syntactically_contained(inst.needle, inst.haystack)) {
      trace_("  refuted: needle occurs syntactically in haystack");
      return Outcome::unsat();
    }
    if (is_ground(inst.needle)) {
      auto g = check_ground_needle(inst);
      if (g.refuted) {
        trace_("  refuted: every haystack word contains the needle");
        return Outcome::unsat();
      }
      if (g.model) return Outcome::sat(*g.model);
    }
    return std::nullopt;
  }

  Outcome solve_frames(const Instance& s) {
    const Bounds bounds = cfg_.profile.apply(compute_bounds(s));
    trace_("  bounds: K0=", bounds.K0, " N0=", bounds.N0, " G=", bounds.G, " (p_lit=", bounds.p_lit,
           " p_aut=", bounds.p_aut, " p_prim=", bounds.p_prim, ")");
    const auto nonflat = haystack_nonflat_vars(s);
    std::vector<std::string> flat_vars;
    for (const auto& x : s.occurring_vars()) {
      if (std::find(nonflat.begin(), nonflat.end(), x) == nonflat.end()) flat_vars.push_back(x);
    }
    const std::size_t max_base = max_needle_base(s);
    for (const auto& z : nonflat) ctxs_.emplace(z, make_gamma_ctx(z, s.lang(z), max_base, bounds.G));

    std::map<std::string, std::vector<Word>> shorts;
    std::map<std::string, Dfa> longs;
    for (const auto& x : flat_vars) {
      shorts[x] = enumerate_words(s.lang(x), bounds.N0 - 1, cfg_.pattern_cap);
      longs[x] = at_least_length(s.lang(x), bounds.N0, s.alphabet.base_size());
    }

    std::optional<std::string> unknown;
    const std::size_t k = flat_vars.size();
    for (std::size_t size = 0; size <= k; ++size) {
      // Subsets of the given size in lexicographic order.
      std::vector<std::size_t> pick(size);
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        std::vector<bool> is_long(k, false);
        for (auto i : pick) is_long[i] = true;
        auto o = solve_subset(s, bounds, flat_vars, is_long, shorts, longs);
        if (o.status == Status::Sat) return o;
        if (o.status == Status::Unknown && !unknown) unknown = o.reason;
        std::size_t i = size;
        while (i > 0 && pick[i - 1] == k - size + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    return unknown ? Outcome::unknown(*unknown) : Outcome::unsat();
  }

  Outcome solve_subset(const Instance& s, const Bounds& bounds, const std::vector<std::string>& flat_vars,
                       const std::vector<bool>& is_long, const std::map<std::string, std::vector<Word>>& shorts,
                       const std::map<std::string, Dfa>& longs) {
    std::vector<std::string> short_vars;
    for (std::size_t i = 0; i < flat_vars.size(); ++i) {
      if (is_long[i]) {
        if (longs.at(flat_vars[i]).size() == 0) return Outcome::unsat();
      } else {
        if (shorts.at(flat_vars[i]).empty()) return Outcome::unsat();
        short_vars.push_back(flat_vars[i]);
      }
    }
    std::optional<std::string> unknown;
    std::vector<std::size_t> idx(short_vars.size(), 0);
    while (true) {
      Assignment fixed;
      for (std::size_t i = 0; i < short_vars.size(); ++i) fixed[short_vars[i]] = shorts.at(short_vars[i])[idx[i]];
      auto o = solve_frame(s, bounds, fixed, flat_vars, is_long, longs);
      if (o.status == Status::Sat) return o;
      if (o.status == Status::Unknown && !unknown) unknown = o.reason;
      std::size_t i = short_vars.size();
      while (i > 0 && ++idx[i - 1] == shorts.at(short_vars[i - 1]).size()) idx[--i] = 0;
      if (i == 0) break;
    }
    return unknown ? Outcome::unknown(*unknown) : Outcome::unsat();
  }

  Outcome solve_frame(const Instance& s, const Bounds& bounds, const Assignment& fixed,
                      const std::vector<std::string>& flat_vars, const std::vector<bool>& is_long,
                      const std::map<std::string, Dfa>& longs) {
    deadline_.check();
    ++stats_.frames;
    // Exact frame instance: short values substituted, long variables restricted to length >= N0.
    Instance frame{s.alphabet, substitute(s.needle, fixed), substitute(s.haystack, fixed), {}};
    for (const auto& x : frame.occurring_vars()) frame.langs.emplace(x, s.lang(x));
    for (std::size_t i = 0; i < flat_vars.size(); ++i) {
      if (is_long[i] && frame.langs.contains(flat_vars[i])) frame.langs[flat_vars[i]] = longs.at(flat_vars[i]);
    }
    auto with_fixed = [&](Outcome o) {
      if (o.status != Status::Sat) return o;
      for (const auto& [x, w] : fixed) o.model[x] = w;
      for (const auto& x : s.occurring_vars()) {
        if (!o.model.contains(x)) o.model[x] = shortest_word(s.lang(x));
      }
      if (!satisfies(s, o.model)) throw InternalError("frame model does not verify");
      return o;
    };
    if (frame.occurring_vars().empty()) {
      bool holds = !is_factor(evaluate(frame.needle, {}), evaluate(frame.haystack, {}));
      return holds ? with_fixed(Outcome::sat({})) : Outcome::unsat();
    }
    if (cfg_.refutation) {
      if (auto o = refute(frame)) return with_fixed(*o);
    }

    // Flat instance: long flat variables exact, non-flat ones replaced by L'_z.
    FlatInstance fi{frame.alphabet, frame.needle, frame.haystack, {}};
    bool truncated = false;
    for (const auto& x : frame.occurring_vars()) {
      if (ctxs_.contains(x)) {
        const auto& g = glued(frame, s, x, bounds);
        truncated |= g.truncated;
        fi.langs[x] = g.patterns;
      } else {
        auto c = classify_flatness(frame.lang(x), cfg_.pattern_cap);
        fi.langs[x] = std::get<FlatDecomposition>(c).patterns;
      }
    }
    FlatStats fs;
    auto o = solve_flat(fi, flat_options(), &fs);
    stats_.checks += fs.checks;
    if (o.status == Status::Unsat) {
      if (truncated) return Outcome::unknown("pattern-cap");
      if (!cfg_.profile.paper) return Outcome::unknown("scaled-incomplete");
    }
    return with_fixed(o);
  }

  const GlueResult& glued(const Instance& frame, const Instance& s, const std::string& z, const Bounds& bounds) {
    // The anchors only look at the needle shape and the Base of its variables.
    Instance shape{frame.alphabet, frame.needle, frame.haystack, s.langs};
    auto pa = needle_anchor(shape, Side::Prefix);
    auto sa = needle_anchor(shape, Side::Suffix);
    auto key = std::make_tuple(z, pa ? pa->base : Word{}, pa ? pa->residue : Word{}, pa.has_value(),
                               sa ? sa->base : Word{}, sa ? sa->residue : Word{}, sa.has_value());
    auto it = glue_cache_.find(key);
    if (it != glue_cache_.end()) return it->second;
    const GammaCaps caps{cfg_.max_paths, cfg_.pattern_cap, deadline_};
    const auto& ctx = ctxs_.at(z);
    auto pref = underapprox_half(shape, ctx, Side::Prefix, bounds, caps, &stats_.paths);
    auto suf = underapprox_half(shape, ctx, Side::Suffix, bounds, caps, &stats_.paths);
    auto g = glue(pref, suf, cfg_.pattern_cap);
    stats_.patterns += g.patterns.size();
    trace_("  L'_", z, ": ", pref.complete.size() + suf.complete.size(), " complete, ", pref.incomplete.size(), "x",
           suf.incomplete.size(), " glued, ", g.patterns.size(), " patterns", g.truncated ? " (truncated)" : "");
    return glue_cache_.emplace(key, std::move(g)).first->second;
  }

  const Instance& inst_;
  const Config& cfg_;
  const Deadline& deadline_;
  Stats& stats_;
  Tracer trace_;
  Stripped stripped_;
  std::map<std::string, GammaCtx> ctxs_;
  std::map<std::tuple<std::string, Word, Word, bool, Word, Word, bool>, GlueResult> glue_cache_;
};

inline void fill_unused(const Instance& inst, Assignment& model) {
  for (const auto& [x, d] : inst.langs) {
    if (!model.contains(x)) model[x] = shortest_word(d);
  }
}

inline Outcome solve_disjunct(const Disjunct& d, const Config& cfg, const Deadline& deadline, Stats& stats) {
  try {
    auto o = DisjunctSolver(d.inst, cfg, deadline, stats).run();
    if (o.status == Status::Sat) {
      if (!satisfies(d.inst, o.model)) throw InternalError("disjunct model does not verify");
      o.model = reconstruct(d, o.model);
    }
    return o;
  } catch (const CapExceeded& e) {
    return Outcome::unknown(e.reason());
  }
}

}  // namespace detail

/// Decides ¬Contains(N, H) under the variables' regular constraints. Every
/// SAT verdict carries a model verified against `inst`.
inline Verdict solve(const Instance& inst, const Config& cfg = {}) {
  const Deadline deadline = Deadline::after_ms(cfg.time_limit_ms);
  detail::Tracer trace(cfg.trace);
  Verdict v;
  auto finish_sat = [&](Assignment model) {
    detail::fill_unused(inst, model);
    if (!satisfies(inst, model)) throw InternalError("model does not verify against the input");
    v.status = Status::Sat;
    v.model = std::move(model);
    return v;
  };

  if (cfg.probe) {
    if (auto m = length_abstraction(inst)) {
      trace("length abstraction: sat");
      return finish_sat(*m);
    }
    auto probe = brute_oracle(inst, cfg.probe_bound, cfg.probe_cap);
    if (probe.status == OracleStatus::Sat) {
      trace("probe: sat at length <= ", cfg.probe_bound);
      return finish_sat(probe.model);
    }
    if (probe.status == OracleStatus::ExhaustedUnsat && !probe.capped) {
      trace("probe: all languages finite and exhausted");
      v.status = Status::Unsat;
      return v;
    }
  }

  Normalized norm;
  try {
    norm = normalize(inst, cfg.normalization_cap);
  } catch (const CapExceeded& e) {
    v.reason = e.reason();
    return v;
  }
  if (norm.trivial_model) {
    trace("normalization: a variable-free disjunct holds");
    return finish_sat(*norm.trivial_model);
  }
  v.stats.disjuncts = norm.disjuncts.size();
  trace("normalization: ", norm.disjuncts.size(), " disjunct(s)");

  std::vector<Outcome> outcomes(norm.disjuncts.size());
  std::vector<Stats> stats(norm.disjuncts.size());
  std::optional<std::string> unknown;
  if (cfg.workers <= 1) {
    for (std::size_t i = 0; i < norm.disjuncts.size(); ++i) {
      trace("disjunct ", i);
      outcomes[i] = detail::solve_disjunct(norm.disjuncts[i], cfg, deadline, stats[i]);
      v.stats += stats[i];
      if (outcomes[i].status == Status::Sat) return finish_sat(outcomes[i].model);
      if (outcomes[i].status == Status::Unknown && !unknown) unknown = outcomes[i].reason;
    }
  } else {
    // Batches of `workers` disjuncts; results are folded in disjunct order.
    for (std::size_t lo = 0; lo < norm.disjuncts.size(); lo += cfg.workers) {
      const std::size_t hi = std::min(norm.disjuncts.size(), lo + cfg.workers);
      std::vector<std::future<Outcome>> jobs;
      for (std::size_t i = lo; i < hi; ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
          return detail::solve_disjunct(norm.disjuncts[i], cfg, deadline, stats[i]);
        }));
      }
      for (std::size_t i = lo; i < hi; ++i) outcomes[i] = jobs[i - lo].get();
      for (std::size_t i = lo; i < hi; ++i) {
        v.stats += stats[i];
        if (outcomes[i].status == Status::Sat) return finish_sat(outcomes[i].model);
        if (outcomes[i].status == Status::Unknown && !unknown) unknown = outcomes[i].reason;
      }
    }
  }
  if (unknown) {
    v.reason = *unknown;
    return v;
  }
  v.status = Status::Unsat;
  return v;
}

}  // namespace notcontains
