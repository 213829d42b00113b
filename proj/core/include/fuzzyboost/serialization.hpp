#pragma once

#include "fuzzyboost/boosting.hpp"
#include "fuzzyboost/metrics.hpp"

#include <string>

namespace fuzzyboost {

/// Shortest decimal representation that parses back to the same double.
/// Every number we persist goes through this, so reloads are exact.
std::string format_double(double value);

/// Versioned model document: format tag, version, content hash, and the
/// full ensemble (scaler, zero model, stages, config echo). The textual
/// form is deterministic: the same ensemble always serializes to the same
/// bytes.
std::string model_to_json(const BoostedEnsemble& ensemble);

/// Parses a model document, verifying the format tag, version, and content
/// hash. Throws std::runtime_error on tampering or version mismatch.
BoostedEnsemble model_from_json(const std::string& text);

void save_model(const BoostedEnsemble& ensemble, const std::string& path);
BoostedEnsemble load_model(const std::string& path);

/// Trace CSV, one row per attempted stage:
/// stage,accepted,c,m,ridge,lambda,train_rmse,val_rmse,test_rmse,seconds
/// Optional fields render as empty cells.
std::string trace_to_csv(const IterationTrace& trace);
void write_trace_csv(const IterationTrace& trace, const std::string& path);

/// Sweep CSV: clusters,fuzzifier,method,test_rmse
std::string sweep_to_csv(const SweepTable& table);
void write_sweep_csv(const SweepTable& table, const std::string& path);

/// EvalReport JSON: {"rmse": ..., "n": ..., "target_units": "..."}
std::string eval_report_to_json(const EvalReport& report);

}  // namespace fuzzyboost
