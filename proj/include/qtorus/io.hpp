#ifndef QTORUS_IO_HPP
#define QTORUS_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qtorus/algebra.hpp"
#include "qtorus/dynamics.hpp"
#include "qtorus/states.hpp"
#include "qtorus/uncertainty.hpp"

namespace qtorus {

inline constexpr char kVersion[] = "qtorus 0.1.0";

// insertion order is emission order, so reruns are byte-identical
using ojson = nlohmann::ordered_json;
// ordered (flag, value) pairs echoed into every output file
using ParamEcho = std::vector<std::pair<std::string, std::string>>;

// fixed %.17g rendering: round-trip exact, locale-free
std::string fmt_g17(double x);

// whole-file write via temp + rename; parent directory must exist
void atomic_write(const std::string& path, const std::string& content);

// leading '#' lines: version then one line per echoed parameter
std::string comment_block(const ParamEcho& echo);
// {"version": ..., "params": {...}} prefix shared by every JSON document
ojson meta_json(const ParamEcho& echo);

ojson identity_report_json(const IdentityReport& r, const ParamEcho& echo);

ojson state_json(const StateVector& s, const ParamEcho& echo);
std::string state_sites_csv(const StateVector& s, const ParamEcho& echo);
std::string state_momentum_csv(const StateVector& s, const ParamEcho& echo);
ojson expectations_json(const ExpectationSet& e, const ParamEcho& echo);

// continuum_ok = false blanks the continuum fields (flat side, no circular mean)
ojson uncertainty_json(const UncertaintyReport& r, bool continuum_ok, const std::string& note,
                       const ParamEcho& echo);
std::string uncertainty_csv(const std::vector<UncertaintyReport>& rows, const ParamEcho& echo);

std::string trace_csv(const EvolutionTrace& tr, const ParamEcho& echo);
// long-format (t, j, prob): one block of rows per requested time
std::string trace_frames_csv(const EvolutionTrace& tr, const ParamEcho& echo);
ojson trace_json(const EvolutionTrace& tr, const ParamEcho& echo);

ojson revival_report_json(const RevivalReport& r);
ojson revival_json(const RevivalReport& grid, const RevivalReport& spectral, bool consistent,
                   const std::string& note, const ParamEcho& echo);

// fit may be null (insufficient positive excess); rows are per-n reports
ojson scaling_json(const std::vector<UncertaintyReport>& rows, const ScalingFit* fit,
                   const std::string& note, const ParamEcho& echo);

// hand-emitted SVG 1.1, self-contained, no external references
std::string svg_bars(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<double>& values,
                     const ParamEcho& echo);
std::string svg_curve(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<double>& xs,
                      const std::vector<double>& ys, const ParamEcho& echo);
std::string svg_loglog(const std::string& title, const std::vector<int>& ns,
                       const std::vector<double>& excesses, double exponent, double amplitude,
                       const ParamEcho& echo);

}  // namespace qtorus

#endif
