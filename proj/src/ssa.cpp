#include "ddhit/ssa.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

namespace ddhit {

namespace {

// Rate policies let the hot loop inline the built-in families; the generic
// policy goes through the stored closures with the out-of-domain clamp.
struct BirthDeathRates {
  double lambda, theta;
  std::size_t size() const { return 2; }
  void eval(double u, double* F, std::uint64_t*) const {
    F[0] = lambda * u;
    F[1] = theta * u;
  }
};

struct SisRates {
  double lambda, theta;
  std::size_t size() const { return 2; }
  void eval(double u, double* F, std::uint64_t*) const {
    F[0] = lambda * u * (1.0 - u);
    F[1] = theta * u;
  }
};

struct GenericRates {
  const ModelSpec* model;
  std::size_t reactions;
  std::size_t size() const { return reactions; }
  void eval(double u, double* F, std::uint64_t* clamps) const {
    for (std::size_t i = 0; i < reactions; ++i) F[i] = model->rate_clamped(i, u, clamps);
  }
};

struct NoRecord {
  void start(double, double) {}
  void event(std::uint64_t, double, double) {}
  void terminal(double, double) {}
};

struct StrideRecorder {
  std::uint64_t stride;
  std::vector<std::pair<double, double>>* out;
  void start(double t, double density) { out->emplace_back(t, density); }
  void event(std::uint64_t k, double t, double density) {
    if (stride > 0 && k % stride == 0) out->emplace_back(t, density);
  }
  void terminal(double t, double density) {
    if (out->empty() || out->back().first != t || out->back().second != density)
      out->emplace_back(t, density);
  }
};

std::int64_t initial_state(const ModelSpec& model, std::int64_t n) {
  if (n <= 0) throw InvalidN("simulate_hitting: n must be positive");
  const double nx = static_cast<double>(n) * model.start();
  const std::int64_t x0 = static_cast<std::int64_t>(std::llround(nx));
  if (std::abs(nx - static_cast<double>(x0)) > 1e-9) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::fprintf(stderr, "ddhit: n*x = %.17g is not an integer; rounding X_0 to %lld\n",
                   nx, static_cast<long long>(x0));
  }
  return x0;
}

// Integer-lattice kernel (all l_i integral): the state is an exact count.
template <class Rates, class Recorder>
HittingSample run_integer(const Rates& rates, const std::int64_t* jumps, std::int64_t x0,
                          std::int64_t hit_level, double n, double t_max, CounterRng rng,
                          std::uint64_t replica, Recorder rec) {
  HittingSample s;
  s.replica_seed = replica;
  std::int64_t state = x0;
  double t = 0.0;
  double F[16];
  const std::size_t M = rates.size();
  rec.start(0.0, static_cast<double>(state) / n);
  if (state >= hit_level) {
    s.hit = true;
    s.tau = 0.0;
    s.terminal_state = static_cast<double>(state);
    rec.terminal(0.0, static_cast<double>(state) / n);
    return s;
  }
  for (;;) {
    const double u = static_cast<double>(state) / n;
    rates.eval(u, F, &s.domain_clamps);
    double total = 0.0;
    for (std::size_t i = 0; i < M; ++i) total += F[i];
    if (!(total > 0.0)) {
      s.censor = CensorReason::Extinct;
      s.terminal_state = static_cast<double>(state);
      rec.terminal(t, u);
      return s;
    }
    const auto [wait, pick] = rng.exp_and_uniform();
    t += wait / (n * total);
    if (t > t_max) {
      s.censor = CensorReason::Horizon;
      s.terminal_state = static_cast<double>(state);
      rec.terminal(t_max, u);
      return s;
    }
    const double threshold = pick * total;
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < M; ++i) {
      acc += F[i];
      if (threshold < acc) break;
    }
    state += jumps[i];
    ++s.events;
    rec.event(s.events, t, static_cast<double>(state) / n);
    if (state >= hit_level) {
      s.hit = true;
      s.tau = t;
      s.terminal_state = static_cast<double>(state);
      rec.terminal(t, static_cast<double>(state) / n);
      return s;
    }
  }
}

// General-lattice kernel: per-reaction event counts keep the state an exact
// integer combination of the jump sizes.
template <class Recorder>
HittingSample run_general(const ModelSpec& model, std::int64_t n, double r, double x0_scaled,
                          double t_max, CounterRng rng, std::uint64_t replica, Recorder rec) {
  HittingSample s;
  s.replica_seed = replica;
  const std::size_t M = model.reaction_count();
  const auto& jumps = model.jumps();
  std::vector<std::int64_t> counts(M, 0);
  std::vector<double> F(M);
  const double nd = static_cast<double>(n);
  const double hit_level = nd * r - 1e-9;
  auto state_of = [&]() {
    double x = x0_scaled;
    for (std::size_t i = 0; i < M; ++i) x += static_cast<double>(counts[i]) * jumps[i];
    return x;
  };
  double state = state_of();
  double t = 0.0;
  rec.start(0.0, state / nd);
  if (state >= hit_level) {
    s.hit = true;
    s.terminal_state = state;
    rec.terminal(0.0, state / nd);
    return s;
  }
  for (;;) {
    const double u = state / nd;
    double total = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      F[i] = model.rate_clamped(i, u, &s.domain_clamps);
      total += F[i];
    }
    if (!(total > 0.0)) {
      s.censor = CensorReason::Extinct;
      s.terminal_state = state;
      rec.terminal(t, u);
      return s;
    }
    const auto [wait, pick] = rng.exp_and_uniform();
    t += wait / (nd * total);
    if (t > t_max) {
      s.censor = CensorReason::Horizon;
      s.terminal_state = state;
      rec.terminal(t_max, u);
      return s;
    }
    const double threshold = pick * total;
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 1 < M; ++i) {
      acc += F[i];
      if (threshold < acc) break;
    }
    ++counts[i];
    state = state_of();
    ++s.events;
    rec.event(s.events, t, state / nd);
    if (state >= hit_level) {
      s.hit = true;
      s.tau = t;
      s.terminal_state = state;
      rec.terminal(t, state / nd);
      return s;
    }
  }
}

template <class Recorder>
HittingSample dispatch(const ModelSpec& model, std::int64_t n, double r,
                       std::uint64_t master_seed, std::uint64_t replica, double t_max,
                       Recorder rec) {
  if (!(t_max > 0.0)) throw InvalidN("simulate_hitting: t_max must be positive");
  CounterRng rng(master_seed, replica, kStreamSsa);
  const std::int64_t x0 = initial_state(model, n);
  const double nd = static_cast<double>(n);
  if (model.integer_jumps()) {
    const std::int64_t hit_level =
        static_cast<std::int64_t>(std::ceil(nd * r - 1e-9));
    std::int64_t jumps_int[16];
    const std::size_t M = model.reaction_count();
    if (M <= 16) {
      for (std::size_t i = 0; i < M; ++i)
        jumps_int[i] = static_cast<std::int64_t>(std::llround(model.jumps()[i]));
      switch (model.kind()) {
        case ModelKind::BirthDeath:
          return run_integer(BirthDeathRates{model.lambda(), model.theta()}, jumps_int,
                             x0, hit_level, nd, t_max, rng, replica, rec);
        case ModelKind::Sis:
          return run_integer(SisRates{model.lambda(), model.theta()}, jumps_int, x0,
                             hit_level, nd, t_max, rng, replica, rec);
        case ModelKind::Custom:
          return run_integer(GenericRates{&model, M}, jumps_int, x0, hit_level, nd,
                             t_max, rng, replica, rec);
      }
    }
  }
  return run_general(model, n, r, static_cast<double>(x0), t_max, rng, replica, rec);
}

}  // namespace

HittingSample simulate_hitting(const ModelSpec& model, std::int64_t n, double r,
                               std::uint64_t master_seed, std::uint64_t replica,
                               double t_max) {
  return dispatch(model, n, r, master_seed, replica, t_max, NoRecord{});
}

std::vector<std::pair<double, double>> simulate_path(const ModelSpec& model, std::int64_t n,
                                                     double r, std::uint64_t master_seed,
                                                     std::uint64_t replica, double t_max,
                                                     std::uint64_t record_stride) {
  std::vector<std::pair<double, double>> out;
  StrideRecorder rec{record_stride, &out};
  dispatch(model, n, r, master_seed, replica, t_max, rec);
  return out;
}

}  // namespace ddhit
