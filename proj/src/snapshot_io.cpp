#include "chkp/snapshot_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "chkp/spectral.hpp"

namespace chkp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json model_to_json(const ModelParams& p) {
    if (p.is_chkp()) return {{"type", "chkp"}, {"kappa", p.chkp().kappa}};
    if (p.is_hcp())
        return {{"type", "hcp"},
                {"alpha", p.hcp().alpha},
                {"beta", p.hcp().beta},
                {"gamma", p.hcp().gamma}};
    return {{"type", "chkp_physical"},
            {"epsilon", p.chkp_physical().epsilon},
            {"gamma", p.chkp_physical().gamma_phys}};
}

ModelParams model_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "chkp") return ModelParams(ChkpParams{j.at("kappa").get<double>()});
    if (type == "hcp")
        return ModelParams(HcpParams{j.at("alpha").get<double>(), j.at("beta").get<double>(),
                                     j.at("gamma").get<double>()});
    if (type == "chkp_physical")
        return ModelParams(ChkpPhysicalParams{j.at("epsilon").get<double>(), j.at("gamma").get<double>()});
    throw std::invalid_argument("snapshot sidecar: unknown model type '" + type + "'");
}

void atomic_write_bytes(const fs::path& path, const void* data, std::size_t bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(static_cast<const char*>(data), std::streamsize(bytes));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& content) {
    atomic_write_bytes(path, content.data(), content.size());
}

void write_snapshot(const fs::path& dir, const std::string& stem, const Snapshot& snap,
                    const std::optional<ModelParams>& model) {
    fs::create_directories(dir);
    const Grid2D& g = snap.field.grid();
    const std::string bin_name = stem + ".bin";

    json side{{"schema_version", 1},
              {"nx", g.nx},
              {"ny", g.ny},
              {"lx", g.lx},
              {"ly", g.ly},
              {"t", snap.t},
              {"byte_order", "little"},
              {"dtype", "float64"},
              {"layout", "x-fastest"},
              {"payload", bin_name}};
    if (model) side["model"] = model_to_json(*model);

    atomic_write_bytes(dir / bin_name, snap.field.data(), sizeof(double) * snap.field.size());
    write_text_file(dir / (stem + ".json"), side.dump(2) + "\n");
}

SnapshotFile read_snapshot(const fs::path& sidecar_json) {
    std::ifstream in(sidecar_json);
    if (!in) throw std::runtime_error("cannot open snapshot sidecar " + sidecar_json.string());
    json side = json::parse(in);

    const int nx = side.at("nx").get<int>();
    const int ny = side.at("ny").get<int>();
    Grid2D g(nx, ny, side.at("lx").get<double>(), side.at("ly").get<double>());
    if (side.at("byte_order").get<std::string>() != "little" ||
        side.at("dtype").get<std::string>() != "float64" ||
        side.at("layout").get<std::string>() != "x-fastest")
        throw std::runtime_error("snapshot sidecar " + sidecar_json.string() +
                                 ": unsupported payload encoding");

    const fs::path bin = sidecar_json.parent_path() / side.at("payload").get<std::string>();
    const std::size_t expect = sizeof(double) * g.size();
    if (fs::file_size(bin) != expect)
        throw std::runtime_error("snapshot payload " + bin.string() + ": expected " +
                                 std::to_string(expect) + " bytes");
    std::vector<double> values(g.size());
    std::ifstream pin(bin, std::ios::binary);
    pin.read(reinterpret_cast<char*>(values.data()), std::streamsize(expect));
    if (!pin) throw std::runtime_error("short read from " + bin.string());

    SnapshotFile sf{{side.at("t").get<double>(), Field2D(g, std::move(values))}, std::nullopt};
    if (side.contains("model")) sf.model = model_from_json(side.at("model"));
    return sf;
}

std::vector<SnapshotFile> read_snapshot_series(const fs::path& dir) {
    std::vector<fs::path> sidecars;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && e.path().extension() == ".json")
            sidecars.push_back(e.path());
    }
    if (sidecars.empty()) throw std::runtime_error("no snap_*.json files in " + dir.string());
    std::sort(sidecars.begin(), sidecars.end());
    std::vector<SnapshotFile> out;
    out.reserve(sidecars.size());
    for (const auto& p : sidecars) out.push_back(read_snapshot(p));
    std::sort(out.begin(), out.end(),
              [](const SnapshotFile& a, const SnapshotFile& b) { return a.snapshot.t < b.snapshot.t; });
    return out;
}

// ---- diagnostics -------------------------------------------------------------

DiagnosticsWriter::DiagnosticsWriter(const fs::path& csv_path)
    : final_path_(csv_path), tmp_path_(csv_path.string() + ".tmp") {
    f_ = std::fopen(tmp_path_.c_str(), "w");
    if (!f_) throw std::runtime_error("cannot open " + tmp_path_.string());
    std::fprintf(f_, "t,l2_norm,h1_seminorm,max_abs,xmean_drift,asymmetry_score,axis_lambda,"
                     "speed_estimate,shape_error\n");
}

DiagnosticsWriter::~DiagnosticsWriter() {
    if (f_) {
        std::fclose(f_);
        std::remove(tmp_path_.c_str());  // finish() not reached; drop the partial temp
    }
}

void DiagnosticsWriter::add_snapshot(const Snapshot& snap) {
    double asym = 0.0, lambda = 0.0, speed = 0.0, shape = 0.0;
    const double n0 = initial_ ? l2_norm(initial_->field) : l2_norm(snap.field);
    if (l2_norm(snap.field) > 0.0) {
        auto [lam, score] = find_axis(snap.field);
        lambda = lam;
        asym = score;
    }
    if (prev_ && snap.t > prev_->t) {
        try {
            const double v = estimate_speed(*prev_, snap);
            accumulated_shift_ += v * (snap.t - prev_->t);
        } catch (const std::invalid_argument&) {
            // x-independent or zero frames carry no speed information
        }
    }
    if (initial_ && snap.t > initial_->t && n0 > 0.0) {
        const double c_run = accumulated_shift_ / (snap.t - initial_->t);
        speed = c_run;
        shape = l2_norm(snap.field - spectral_shift(initial_->field, c_run * (snap.t - initial_->t))) / n0;
    }
    std::fprintf(f_, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", snap.t,
                 l2_norm(snap.field), h1_seminorm(snap.field), max_abs(snap.field),
                 xmean_drift(snap.field), asym, lambda, speed, shape);
    std::fflush(f_);
    if (!initial_) initial_ = snap;
    prev_ = snap;
}

void DiagnosticsWriter::mark_blow_up(double t) {
    const double nan = std::nan("");
    std::fprintf(f_, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, nan, nan, nan,
                 nan, nan, nan, nan, nan);
    std::fflush(f_);
}

void DiagnosticsWriter::finish() {
    if (!f_) return;
    std::fclose(f_);
    f_ = nullptr;
    fs::rename(tmp_path_, final_path_);
}

// ---- reports ------------------------------------------------------------------

std::string symmetry_report_json(const SymmetryReport& rep) {
    json j{{"lambda_of_t", rep.lambda_of_t},
           {"asymmetry_of_t", rep.asymmetry_of_t},
           {"lambda_dot_estimate", rep.lambda_dot_estimate},
           {"lambda_curvature", rep.lambda_curvature},
           {"thresholds", {{"symmetric", rep.symmetric_threshold}}},
           {"norm", "relative-L2"}};
    return j.dump(2) + "\n";
}

std::string steadiness_report_json(const SteadinessReport& rep) {
    json j{{"speed_estimate", rep.speed_estimate},
           {"shape_error_of_t", rep.shape_error_of_t},
           {"verdict", rep.verdict},
           {"max_shape_error", rep.max_shape_error},
           {"thresholds", {{"steady", rep.steady_threshold}}}};
    return j.dump(2) + "\n";
}

}  // namespace chkp
