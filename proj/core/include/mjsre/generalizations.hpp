#pragma once

#include <cstdint>
#include <vector>

#include "mjsre/random.hpp"
#include "mjsre/recurrence.hpp"
#include "mjsre/sampling.hpp"
#include "mjsre/scenario.hpp"
#include "mjsre/stability.hpp"

namespace mjsre {

// --- Requests for specific servers -------------------------------------

/// alpha unspecified servers plus the specific positions in `subset`
/// (1-based, ascending, distinct).
struct SpecificDemand {
  int alpha = 0;
  std::vector<int> subset;

  /// Throws DemandError when alpha + |subset| > servers or the request is empty.
  void validate(int servers) const;
};

/// Uniform size-`beta` subset of 1..servers, ascending.
std::vector<int> draw_subset(int servers, int beta, KeyedStream& rng);

/// R(V(alpha, S, W) + sigma F(alpha, S) - tau U)^+.
WorkloadVector smjsre_step(const WorkloadVector& w, const SpecificDemand& d, double sigma, double tau);

// --- Multiple resource types -------------------------------------------

/// One ordered workload vector per resource type.
struct MultiWorkload {
  std::vector<WorkloadVector> types;

  static MultiWorkload zero(const std::vector<int>& servers);
  friend bool operator==(const MultiWorkload&, const MultiWorkload&) = default;
};

/// Per-type demand; 0 <= alpha_t <= s_t, at least one positive.
struct MultiDemand {
  std::vector<int> alpha;

  void validate(const std::vector<int>& servers) const;
};

bool dominated_by(const MultiWorkload& a, const MultiWorkload& b);

/// Synchronizes every demanded type at m = max_t W_t^{alpha_t} (types with
/// alpha_t = 0 excluded), loads sigma, ages by tau, reorders per type.
MultiWorkload mmjsre_step(const MultiWorkload& w, const MultiDemand& d, double sigma, double tau);

// --- Forward runs for the variants ------------------------------------

/// Class c of `base` additionally asks for specific_servers[c] specific servers.
struct SpecificScenario {
  Scenario base;
  std::vector<int> specific_servers;

  void validate() const;
};

/// Multi-resource system: per-type server counts and per-class demand vectors.
/// Class probabilities, services and arrivals come from `base`; base.servers
/// and the classes' scalar demands are ignored.
struct MultiScenario {
  Scenario base;
  std::vector<int> servers;
  std::vector<std::vector<int>> demands;  // one vector per class

  void validate() const;
};

struct VariantTrajectory {
  std::vector<int> job_class;
  std::vector<double> waiting_time;
};

VariantTrajectory forward_run_specific(const SpecificScenario& scenario, const Stream& stream, std::int64_t n_jobs);
VariantTrajectory forward_run_multi(const MultiScenario& scenario, const Stream& stream, std::int64_t n_jobs);

// --- Random assignment -------------------------------------------------

/// Pile where servers keep their identity (never reordered).
struct RaPile {
  std::vector<double> values;
  double offset = 0.0;

  static RaPile zero(std::size_t servers) { return {std::vector<double>(servers, 0.0), 0.0}; }
  double sup_norm() const;
};

/// A job of demand alpha takes a uniformly random size-alpha set A of
/// servers, drawn from `key`: H^i <- max_{j in A} H^j + sigma for i in A.
RaPile ra_pile_step(const RaPile& h, int alpha, double sigma, const StreamKey& key);

/// estimate_gamma with random instead of least-loaded assignment.
StabilityEstimate ra_gamma(const Scenario& scenario, const Stream& stream, const StabilityOptions& options = {});

}  // namespace mjsre
