#pragma once

#include "wavedamp/report.hpp"
#include "wavedamp/scenario.hpp"

namespace wavedamp {

struct RunOptions {
    int workers = 0;         // 0 -> hardware parallelism
    bool want_series = true; // collect the CSV series
};

/// Executes classification, zone construction, the parallel xi-sweep of mode
/// solves, norm series, envelope comparisons, and every selected check.  The
/// report is deterministic and independent of the worker count; a hypothesis
/// violation (expected classification mismatch) aborts the envelope checks
/// but still emits the classification and zone sections.
Report run_scenario(const Scenario& sc, const RunOptions& opts = {});

} // namespace wavedamp
