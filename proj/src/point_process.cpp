#include "cadflow/point_process.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cadflow/rng.hpp"

namespace cadflow {

void MarkSpace::validate() const {
  if (marks.empty()) throw ConfigError("mark space must be non-empty");
  std::set<std::string> seen(marks.begin(), marks.end());
  if (seen.size() != marks.size()) throw ConfigError("mark identifiers must be unique");
}

int MarkSpace::index_of(const std::string& mark) const {
  for (std::size_t i = 0; i < marks.size(); ++i)
    if (marks[i] == mark) return static_cast<int>(i);
  return -1;
}

void InterArrival::validate() const {
  switch (kind) {
    case Kind::Exponential:
      if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError("exponential inter-arrival rate must be positive");
      break;
    case Kind::Uniform:
      if (!(a > 0.0) || !(b >= a) || !std::isfinite(b))
        throw ConfigError("uniform inter-arrival needs 0 < a <= b");
      break;
    case Kind::Fixed:
      if (!(d > 0.0) || !std::isfinite(d))
        throw ConfigError("fixed inter-arrival spacing must be positive");
      break;
  }
}

InterArrival exponential_arrivals(double rate) {
  InterArrival ia;
  ia.kind = InterArrival::Kind::Exponential;
  ia.rate = rate;
  ia.validate();
  return ia;
}

InterArrival uniform_arrivals(double a, double b) {
  InterArrival ia;
  ia.kind = InterArrival::Kind::Uniform;
  ia.a = a;
  ia.b = b;
  ia.validate();
  return ia;
}

InterArrival fixed_arrivals(double d) {
  InterArrival ia;
  ia.kind = InterArrival::Kind::Fixed;
  ia.d = d;
  ia.validate();
  return ia;
}

void RenewalSpec::validate() const {
  inter_arrival.validate();
  mark_space.validate();
  if (mark_weights.size() != mark_space.marks.size())
    throw ConfigError("mark_weights length must match the mark space");
  double total = 0.0;
  for (double w : mark_weights) {
    if (!(w >= 0.0)) throw ConfigError("mark_weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mark_weights must sum to 1");
}

void MarkedPointRealization::validate() const {
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (times.size() != marks.size()) throw ConfigError("times and marks lengths differ");
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw ConfigError("hitting times must be strictly increasing and positive");
    if (!(t <= horizon)) throw ConfigError("hitting times must lie in (0, horizon]");
    prev = t;
  }
}

namespace {

double draw_inter_arrival(const InterArrival& ia, Rng& rng) {
  switch (ia.kind) {
    case InterArrival::Kind::Exponential:
      return rng.exponential(ia.rate);
    case InterArrival::Kind::Uniform:
      return rng.uniform(ia.a, ia.b);
    case InterArrival::Kind::Fixed:
      return ia.d;
  }
  return ia.d;
}

}  // namespace

MarkedPointRealization sample_renewal(const RenewalSpec& spec, double horizon) {
  spec.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");

  Rng time_rng(derive_stream(spec.seed, 0));
  Rng mark_rng(derive_stream(spec.seed, 1));

  MarkedPointRealization r;
  r.horizon = horizon;
  r.seed = spec.seed;
  r.spec = spec;

  double alpha = 0.0;
  for (;;) {
    alpha += draw_inter_arrival(spec.inter_arrival, time_rng);
    if (!(alpha <= horizon)) break;
    r.times.push_back(alpha);
    r.marks.push_back(spec.mark_space.marks[static_cast<std::size_t>(mark_rng.discrete(spec.mark_weights))]);
  }
  return r;
}

std::vector<std::pair<double, std::string>> atoms_in_window(const MarkedPointRealization& r,
                                                            double t) {
  if (!(t >= 0.0) || !(t <= r.horizon)) throw DomainError("window endpoint outside [0, horizon]");
  std::vector<std::pair<double, std::string>> out;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    if (r.times[k] > t) break;
    out.emplace_back(r.times[k], r.marks[k]);
  }
  return out;
}

double counting_integral(const AtomFunctional& f, const MarkedPointRealization& r, double t) {
  if (!(t >= 0.0) || !(t <= r.horizon)) throw DomainError("window endpoint outside [0, horizon]");
  double sum = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    if (r.times[k] > t) break;
    double fk = f(r.times[k], r.marks[k]);
    if (!std::isfinite(fk)) {
      std::ostringstream msg;
      msg << "non-finite integrand at atom " << k << " (time " << r.times[k] << ", mark '"
          << r.marks[k] << "')";
      throw NumericError(msg.str());
    }
    sum += fk;
  }
  return sum;
}

namespace {

nlohmann::json inter_arrival_to_json(const InterArrival& ia) {
  switch (ia.kind) {
    case InterArrival::Kind::Exponential:
      return {{"kind", "exponential"}, {"rate", ia.rate}};
    case InterArrival::Kind::Uniform:
      return {{"kind", "uniform"}, {"a", ia.a}, {"b", ia.b}};
    case InterArrival::Kind::Fixed:
      return {{"kind", "fixed"}, {"d", ia.d}};
  }
  return {};
}

InterArrival inter_arrival_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential") return exponential_arrivals(j.at("rate").get<double>());
  if (kind == "uniform") return uniform_arrivals(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "fixed") return fixed_arrivals(j.at("d").get<double>());
  throw ConfigError("unknown inter-arrival kind '" + kind + "'");
}

}  // namespace

std::string realization_to_json(const MarkedPointRealization& r) {
  nlohmann::json j;
  j["horizon"] = r.horizon;
  j["times"] = r.times;
  j["marks"] = r.marks;
  j["seed"] = r.seed;
  if (r.spec) {
    nlohmann::json s;
    s["inter_arrival"] = inter_arrival_to_json(r.spec->inter_arrival);
    s["marks"] = r.spec->mark_space.marks;
    s["mark_weights"] = r.spec->mark_weights;
    s["seed"] = r.spec->seed;
    j["spec"] = s;
  } else {
    j["spec"] = nullptr;
  }
  return j.dump(2);
}

MarkedPointRealization realization_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MarkedPointRealization r;
  r.horizon = j.at("horizon").get<double>();
  r.times = j.at("times").get<std::vector<double>>();
  r.marks = j.at("marks").get<std::vector<std::string>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("spec").is_null()) {
    const nlohmann::json& s = j.at("spec");
    RenewalSpec spec;
    spec.inter_arrival = inter_arrival_from_json(s.at("inter_arrival"));
    spec.mark_space.marks = s.at("marks").get<std::vector<std::string>>();
    spec.mark_weights = s.at("mark_weights").get<std::vector<double>>();
    spec.seed = s.at("seed").get<std::uint64_t>();
    r.spec = spec;
  }
  r.validate();
  return r;
}

}  // namespace cadflow
