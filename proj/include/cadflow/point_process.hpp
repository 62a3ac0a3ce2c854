#ifndef CADFLOW_POINT_PROCESS_HPP
#define CADFLOW_POINT_PROCESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cadflow/errors.hpp"

namespace cadflow {

// Finite ordered mark set standing in for the measurable mark space.
struct MarkSpace {
  std::vector<std::string> marks;

  void validate() const;
  int index_of(const std::string& mark) const;  // -1 if absent
};

// Inter-arrival law of the renewal construction. The support must be strictly
// positive so hitting times are strictly increasing.
struct InterArrival {
  enum class Kind { Exponential, Uniform, Fixed };
  Kind kind = Kind::Fixed;
  double rate = 1.0;  // Exponential
  double a = 0.0;     // Uniform lower bound, must be > 0
  double b = 1.0;     // Uniform upper bound
  double d = 1.0;     // Fixed spacing

  void validate() const;
};

InterArrival exponential_arrivals(double rate);
InterArrival uniform_arrivals(double a, double b);
InterArrival fixed_arrivals(double d);

struct RenewalSpec {
  InterArrival inter_arrival;
  MarkSpace mark_space;
  std::vector<double> mark_weights;  // probability vector over mark_space
  std::uint64_t seed = 0;

  void validate() const;
};

// One sample path of the finite simple marked point process on (0, horizon]:
// strictly increasing hitting times with one mark per atom. The implicit
// zeroth time is 0 and is not stored.
struct MarkedPointRealization {
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<std::string> marks;
  std::uint64_t seed = 0;
  std::optional<RenewalSpec> spec;  // absent for directly injected paths

  std::size_t atom_count() const { return times.size(); }
  void validate() const;
};

// Draws hitting times alpha_m as partial sums of i.i.d. inter-arrivals and
// i.i.d. marks, keeping only atoms with alpha_m <= horizon. Deterministic
// given the spec's seed; the mark stream is split off the time stream so the
// mark law never perturbs the times.
MarkedPointRealization sample_renewal(const RenewalSpec& spec, double horizon);

// Atoms with alpha_k <= t, in increasing time order (the window is (0, t]).
std::vector<std::pair<double, std::string>> atoms_in_window(const MarkedPointRealization& r,
                                                            double t);

// Pathwise integral of f against the counting measure over (0, t] x Z; for a
// finite simple path this is the finite sum of f over the atoms in the window.
using AtomFunctional = std::function<double(double time, const std::string& mark)>;
double counting_integral(const AtomFunctional& f, const MarkedPointRealization& r, double t);

// Lossless JSON round-trip ({horizon, times, marks, seed, spec}).
std::string realization_to_json(const MarkedPointRealization& r);
MarkedPointRealization realization_from_json(const std::string& text);

}  // namespace cadflow

#endif
