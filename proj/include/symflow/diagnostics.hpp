#pragma once

#include <map>
#include <string>
#include <vector>

#include "symflow/field.hpp"
#include "symflow/rates.hpp"

namespace symflow {

// Time series of named diagnostic channels sampled at common times, plus
// string metadata (configuration hash, run parameters) carried into artifacts.
struct DiagnosticSeries {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> channels;
  std::map<std::string, std::string> meta;

  void append(double t) { times.push_back(t); }
  void set(const std::string& name, double v);  // value for the latest time
  const std::vector<double>& channel(const std::string& name) const;
  void validate() const;  // strictly increasing times, equal channel lengths
};

struct PowerLawFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

// Least-squares slope of log(value) against log(1+t) over times in
// [t_min, t_max]. Requires >= 8 samples in the window, all positive.
PowerLawFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                          double t_min, double t_max);

struct TailFit {
  double exponent = 0.0;
  bool validity = false;  // false once shell averages hit the resolution floor
  int shells = 0;
};

// Slope of log shell-average of |field| against log r over r in
// [r_min, r_max]; shells are dx-wide annuli (2D) or spherical shells (3D)
// centered on the box origin. Validity requires every shell average to stay
// above 1e-12 of the field's grid maximum.
TailFit tail_exponent(const GridField& field, double r_min, double r_max);

struct CompareEntry {
  std::string channel;
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // set when the entry fails for a structural reason
};

struct CompareReport {
  std::vector<CompareEntry> entries;
  bool all_pass = true;
};

struct CompareOptions {
  double fit_t_min = 5.0;
  double fit_t_max = 1e300;       // clipped to the series horizon
  double time_tolerance = 0.3;    // PDE-measured time exponents
  double space_tolerance = 0.5;   // shell-statistics tail exponents
  double moment_ceiling = 1e-5;   // scale-normalized moment channels
};

// Checks the measured series against a catalog prediction: fitted L^p time
// exponents (when the catalog makes a time claim), the last valid tail
// exponent against -gamma, and scale-normalized moment channels through the
// predicted vanishing order. Throws if a required channel is missing.
CompareReport compare(const DiagnosticSeries& series, const DecayPrediction& prediction,
                      const CompareOptions& options = {});

}  // namespace symflow
