#include "photonstat/drive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photonstat/errors.hpp"

namespace photonstat {

namespace {

constexpr double kWindowDecayConstants = 12.0;

double envelope_end(const Envelope& envelope) {
  if (const auto* sq = std::get_if<SquarePulse>(&envelope)) return sq->width;
  const auto& s = std::get<SampledPulse>(envelope);
  return s.times.empty() ? 0.0 : s.times.back();
}

double decay_of(const Topology& topology) {
  if (const auto* two = std::get_if<TwoLine>(&topology)) return 1.0 + two->ratio;
  return 1.0;
}

}  // namespace

double default_window_end(const Envelope& envelope, const Topology& topology) {
  return envelope_end(envelope) + kWindowDecayConstants / decay_of(topology);
}

DriveSpec DriveSpec::make(Envelope envelope, Topology topology, std::optional<double> t_end,
                          InitialState initial) {
  DriveSpec spec{std::move(envelope), std::move(topology), 0.0, initial};
  spec.t_end = t_end ? *t_end : default_window_end(spec.envelope, spec.topology);
  spec.validate();
  return spec;
}

void DriveSpec::validate() const {
  std::ostringstream err;
  if (const auto* sq = std::get_if<SquarePulse>(&envelope)) {
    if (!(sq->width > 0.0) || !std::isfinite(sq->width))
      err << "pulse width T must satisfy T > 0 (got " << sq->width << ")";
    else if (!(sq->photons >= 0.0) || !std::isfinite(sq->photons))
      err << "photon number N must satisfy N >= 0 (got " << sq->photons << ")";
  } else {
    const auto& s = std::get<SampledPulse>(envelope);
    if (s.times.size() < 2 || s.times.size() != s.rates.size()) {
      err << "sampled envelope needs at least two (t, N_in) samples of equal length";
    } else if (s.times.front() < 0.0) {
      err << "sampled envelope must start at t >= 0";
    } else {
      for (std::size_t i = 0; i < s.times.size() && err.tellp() == 0; ++i) {
        if (!std::isfinite(s.times[i]) || !std::isfinite(s.rates[i]))
          err << "sampled envelope contains a non-finite value";
        else if (s.rates[i] < 0.0)
          err << "sampled envelope requires N_in(t) >= 0 (got " << s.rates[i] << " at t = "
              << s.times[i] << ")";
        else if (i > 0 && !(s.times[i] > s.times[i - 1]))
          err << "sampled envelope times must be strictly increasing";
      }
    }
  }
  if (err.tellp() == 0) {
    if (const auto* two = std::get_if<TwoLine>(&topology)) {
      if (!(two->ratio > 0.0 && two->ratio <= 1.0))
        err << "coupling ratio must satisfy 0 < a <= 1 (got " << two->ratio << ")";
    }
  }
  if (err.tellp() == 0 && !std::isfinite(detuning())) err << "detuning must be finite";
  if (err.tellp() == 0) {
    const double end = envelope_end(envelope);
    if (!std::isfinite(t_end) || t_end < end)
      err << "counting window must contain the pulse: t_end >= " << end << " (got " << t_end
          << ")";
  }
  if (err.tellp() != 0) throw ConfigError(err.str());
}

double DriveSpec::rate(double t) const {
  if (const auto* sq = std::get_if<SquarePulse>(&envelope)) {
    return (t >= 0.0 && t < sq->width) ? sq->photons / sq->width : 0.0;
  }
  const auto& s = std::get<SampledPulse>(envelope);
  if (s.times.empty() || t < s.times.front() || t > s.times.back()) return 0.0;
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  if (it == s.times.end()) return s.rates.back();
  const auto hi = static_cast<std::size_t>(it - s.times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - s.times[lo]) / (s.times[hi] - s.times[lo]);
  return (1.0 - w) * s.rates[lo] + w * s.rates[hi];
}

double DriveSpec::pulse_end() const { return envelope_end(envelope); }

double DriveSpec::peak_rate() const {
  if (const auto* sq = std::get_if<SquarePulse>(&envelope)) return sq->photons / sq->width;
  const auto& s = std::get<SampledPulse>(envelope);
  return s.rates.empty() ? 0.0 : *std::max_element(s.rates.begin(), s.rates.end());
}

std::vector<double> DriveSpec::breakpoints() const {
  std::vector<double> pts{0.0, t_end};
  if (const auto* sq = std::get_if<SquarePulse>(&envelope)) {
    pts.push_back(sq->width);
  } else {
    const auto& s = std::get<SampledPulse>(envelope);
    pts.insert(pts.end(), s.times.begin(), s.times.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [this](double t) { return t < 0.0 || t > t_end; }),
            pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double DriveSpec::detuning() const {
  return std::visit([](const auto& t) { return t.detuning; }, topology);
}

double DriveSpec::total_decay() const { return decay_of(topology); }

double DriveSpec::drive_amplitude(double t) const {
  const double n_in = rate(t);
  if (n_in < 0.0) throw ConfigError("N_in(t) must be non-negative");
  if (const auto* two = std::get_if<TwoLine>(&topology)) return std::sqrt(two->ratio * n_in);
  return std::sqrt(0.5 * n_in);
}

}  // namespace photonstat
