#pragma once

#include <ostream>

#include "csv.hpp"
#include "estimator.hpp"

namespace mdf {

/// Line-oriented key=value rendering of a score report.
inline void write_report(std::ostream& out, const ScoreReport& r) {
  out << "score=" << csv::format_double(r.score) << '\n'
      << "error_counts=" << csv::format_double(r.error_counts) << '\n'
      << "sample_size=" << r.sample_size << '\n'
      << "grid_steps=" << r.grid.size() << '\n'
      << "r_max=" << csv::format_double(r.grid.r_max()) << '\n'
      << "scaling=" << r.scaling << '\n'
      << "intrinsic=" << (r.intrinsic ? "true" : "false") << '\n'
      << "status=" << (r.degenerate() ? "degenerate_fit" : "ok") << '\n';
}

}  // namespace mdf
