#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chkp/analysis.hpp"
#include "chkp/model.hpp"
#include "chkp/timestep.hpp"

namespace chkp {

// Snapshot persistence: a JSON sidecar next to a raw little-endian float64
// payload (x-fastest), pair named snap_NNNNNN.{json,bin}. Writes go through
// a temp file and rename, so partial output never shadows a good file.

struct SnapshotFile {
    Snapshot snapshot;
    std::optional<ModelParams> model;
};

void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const Snapshot& snap,
                    const std::optional<ModelParams>& model);
SnapshotFile read_snapshot(const std::filesystem::path& sidecar_json);

/// All snap_*.json in dir, ordered by time.
std::vector<SnapshotFile> read_snapshot_series(const std::filesystem::path& dir);

/// Diagnostics CSV, one row per snapshot:
/// t,l2_norm,h1_seminorm,max_abs,xmean_drift,asymmetry_score,axis_lambda,
/// speed_estimate,shape_error. 17 significant digits, '.' decimal, '\n'
/// endings. A blow-up appends one final row with the failure time and nan
/// data columns.
class DiagnosticsWriter {
public:
    explicit DiagnosticsWriter(const std::filesystem::path& csv_path);
    ~DiagnosticsWriter();

    /// Computes the analysis columns incrementally (axis, pairwise speed,
    /// shape error against the shifted initial frame).
    void add_snapshot(const Snapshot& snap);
    void mark_blow_up(double t);
    void finish();  // atomic rename into place

private:
    std::filesystem::path final_path_;
    std::filesystem::path tmp_path_;
    FILE* f_ = nullptr;
    std::optional<Snapshot> initial_;
    std::optional<Snapshot> prev_;
    double accumulated_shift_ = 0.0;
};

std::string symmetry_report_json(const SymmetryReport& rep);
std::string steadiness_report_json(const SteadinessReport& rep);

/// Atomic small-file write (temp + rename).
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace chkp
