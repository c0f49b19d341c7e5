// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <omp.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ppnet/core/io.hpp"
#include "ppnet/dataset/augment.hpp"
#include "ppnet/dataset/patch_set.hpp"
#include "ppnet/dataset/sampling.hpp"
#include "ppnet/dataset/synthetic.hpp"
#include "ppnet/evaluation/evaluate.hpp"
#include "ppnet/explain/cam.hpp"
#include "ppnet/ingest/geo.hpp"
#include "ppnet/ingest/raster.hpp"
#include "ppnet/model/network.hpp"
#include "ppnet/training/loss.hpp"
#include "ppnet/training/optimizer.hpp"
#include "ppnet/training/trainer.hpp"
#include "support/coded_raster.hpp"
#include "support/linear_probe.hpp"
#include "support/temp_dir.hpp"

using namespace ppnet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kProbeMinAccuracy = 0.90;
constexpr double kPlantMinAccuracy = 95.0;  // percent, balanced test accuracy
constexpr int kPlantMaxEpochs = 30;
constexpr double kPlantMaxSeconds = 600.0;
constexpr double kCoolingMinAccuracy = 95.0;  // percent
constexpr double kCoolingThreshold = 0.90;
constexpr int kTransferSeeds = 5;
constexpr int kGradProbes = 20;
constexpr double kGradRelTol = 1e-3;
constexpr double kSgdTol = 1e-12;
constexpr double kNormTol = 1e-4;
constexpr int kCamTriples = 50;
constexpr double kCamTol = 1e-4;
constexpr double kRowSumTol = 1e-6;
constexpr double kRandomSigmas = 3.0;
constexpr double kCropTolMetres = 10.0;
constexpr int kCropCentres = 100;
constexpr int kBackgroundCentres = 10000;
constexpr double kExclusionRadius = 1000.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Trained plant model and its dataset, reused by later criteria.
struct PlantRun {
    PatchSet data;
    ModelParams model;
    bool ready = false;
};

PlantRun& plant_run() {
    static PlantRun run;
    return run;
}

// ------------------------------------------------------------------------ 1

Outcome synthetic_plant_end_to_end() {
    auto& run = plant_run();
    const auto t0 = std::chrono::steady_clock::now();
    auto patches = generate_synthetic_set(Task::Plant, 500, 7);
    std::vector<int> labels;
    for (const auto& p : patches) labels.push_back(p.label);
    const double probe = testing::probe_holdout_accuracy(patches, labels, kPlantClassCount + 1);
    run.data = make_patch_set(patches, Task::Plant, 1);
    patches = {};
    std::printf("INFO   fixture: 11 x 500 patches in %.1f s, linear-probe holdout accuracy %.4f\n", seconds_since(t0),
                probe);

    TrainConfig cfg;
    cfg.model = "tiny";
    cfg.epochs = kPlantMaxEpochs;
    cfg.per_class = 48;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.1;
    cfg.early_stop_patience = 8;
    const auto t1 = std::chrono::steady_clock::now();
    TrainOptions opts;
    opts.on_epoch = [](const EpochRecord& r) {
        std::printf("INFO   plant epoch %2d loss %.4f val %.4f lr %.3g t %.0f s\n", r.epoch, r.train_loss, r.val_accuracy,
                    r.learning_rate, r.wall_time);
        std::fflush(stdout);
    };
    const auto result = train(run.data, cfg, opts);
    const double seconds = seconds_since(t1);
    run.model = result.best;
    run.ready = true;

    EvaluationOptions eo;
    eo.n_draws = 10;
    const auto report = evaluate(run.model, run.data, eo);
    const bool pass = probe >= kProbeMinAccuracy && report.overall_accuracy >= kPlantMinAccuracy &&
                      result.state.epoch <= kPlantMaxEpochs && seconds <= kPlantMaxSeconds;
    std::ostringstream os;
    os << "probe " << fmt("%.4f", probe) << " (>= 0.90), test accuracy " << fmt("%.2f", report.overall_accuracy)
       << "% (>= 95) after " << result.state.epoch << " epochs, training " << fmt("%.0f", seconds) << " s (<= 600) on "
       << omp_get_max_threads() << " thread(s)";
    return {pass, os.str()};
}

// ------------------------------------------------------------------------ 2

Outcome synthetic_cooling_transfer() {
    const auto& run = plant_run();
    if (!run.ready) return {false, "plant model unavailable"};
    const auto data = make_patch_set(generate_synthetic_set(Task::Cooling, 150, 11), Task::Cooling, 2);

    TrainConfig cfg;
    cfg.task = Task::Cooling;
    cfg.model = "tiny";
    cfg.epochs = 15;
    cfg.per_class = 32;
    cfg.batch_size = 32;
    cfg.learning_rate = 0.05;
    cfg.early_stop_patience = std::nullopt;
    // Runs that never reach the threshold count as one epoch past the budget.
    const double unreached = cfg.epochs + 1;

    std::vector<double> transfer_epochs, random_epochs, transfer_acc;
    EvaluationOptions eo;
    eo.n_draws = 10;
    for (int seed = 1; seed <= kTransferSeeds; ++seed) {
        cfg.init_seed = cfg.sampler_seed = static_cast<std::uint64_t>(seed);
        const auto t = train_cooling(data, run.model, cfg);
        const auto r = train(data, cfg);
        const auto et = epochs_to_accuracy(t.state.history, kCoolingThreshold);
        const auto er = epochs_to_accuracy(r.state.history, kCoolingThreshold);
        transfer_epochs.push_back(et ? *et : unreached);
        random_epochs.push_back(er ? *er : unreached);
        transfer_acc.push_back(evaluate_cooling(t.best, data, eo).overall_accuracy);
        std::printf("INFO   cooling seed %d: transfer epochs-to-90%% %s, test %.2f%%; random epochs-to-90%% %s\n", seed,
                    et ? std::to_string(*et).c_str() : "never", transfer_acc.back(),
                    er ? std::to_string(*er).c_str() : "never");
        std::fflush(stdout);
    }
    const double mt = median(transfer_epochs), mr = median(random_epochs), acc = median(transfer_acc);
    std::ostringstream os;
    os << "median transfer test accuracy " << fmt("%.2f", acc) << "% (>= 95), median epochs-to-90%: transfer "
       << fmt("%.1f", mt) << " vs random " << fmt("%.1f", mr);
    return {acc >= kCoolingMinAccuracy && mt <= mr, os.str()};
}

// ------------------------------------------------------------------------ 3

Outcome shape_suite() {
    bool ok = true;
    std::ostringstream os;
    auto params = build_model(ModelSpec::resnet50(11), 1);
    Network<float> net(params);
    const Tensor<float> x({1, 10, 100, 100}, 0.1f);
    const auto pre = net.stem(x, Mode::Eval);
    ok &= pre.shape() == Shape{1, 64, 100, 100};
    os << "pre-stage " << pre.dim(2) << "x" << pre.dim(3);

    auto standard = build_model(ModelSpec::resnet50_standard_stem(11), 1);
    Network<float> snet(standard);
    const auto spre = snet.stem(x, Mode::Eval);
    ok &= spre.shape() == Shape{1, 64, 25, 25};
    os << ", standard stem " << spre.dim(2) << "x" << spre.dim(3);

    ok &= params.get("conv1.weight").shape() == Shape{64, 10, 3, 3};
    ok &= params.get("fc.weight").shape() == Shape{11, 2048};
    ok &= params.get("fc.bias").shape() == Shape{11};
    ok &= infer_shapes(params.spec, 100).pre_stage == 100 && infer_shapes(standard.spec, 100).pre_stage == 25;
    os << ", conv1 " << shape_string(params.get("conv1.weight").shape()) << ", head "
       << shape_string(params.get("fc.weight").shape());
    return {ok, os.str()};
}

// ------------------------------------------------------------------------ 4

Outcome gradient_check() {
    auto p = build_model(ModelSpec::tiny(3), 21).cast<double>();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    for (auto& t : p.tensors)
        if (t.name.find("bn") != std::string::npos && t.name.ends_with(".weight"))
            for (auto& v : t.value.storage()) v = scale(rng);
    Tensor<double> x({4, 10, 32, 32});
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : x.storage()) v = normal(rng);
    const std::vector<int> labels{0, 1, 2, 1};

    auto loss = [&]() {
        Network<double> net(p);
        return cross_entropy(net.forward(x, Mode::Train), std::span<const int>(labels));
    };
    Network<double> net(p);
    Tensor<double> dlogits;
    cross_entropy(net.forward(x, Mode::Train), std::span<const int>(labels), &dlogits);
    const auto grads = net.backward(dlogits);

    std::vector<std::size_t> trainable;
    for (std::size_t i = 0; i < p.tensors.size(); ++i)
        if (!p.tensors[i].buffer) trainable.push_back(i);
    std::uniform_int_distribution<std::size_t> pick_tensor(0, trainable.size() - 1);
    const double h = 1e-6;
    double worst = 0.0;
    std::string worst_name;
    for (int k = 0; k < kGradProbes; ++k) {
        const std::size_t ti = trainable[pick_tensor(rng)];
        std::uniform_int_distribution<std::size_t> pick_elem(0, p.tensors[ti].value.size() - 1);
        const std::size_t e = pick_elem(rng);
        double& w = p.tensors[ti].value[e];
        const double saved = w;
        w = saved + h;
        const double lp = loss();
        w = saved - h;
        const double lm = loss();
        w = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double analytic = grads[ti][e];
        const double rel = std::abs(numeric - analytic) / std::max(std::abs(numeric) + std::abs(analytic), 1e-8);
        if (rel > worst) {
            worst = rel;
            worst_name = p.tensors[ti].name;
        }
    }
    return {worst <= kGradRelTol,
            std::to_string(kGradProbes) + " probes, worst relative error " + fmt("%.2e", worst) + " (" + worst_name + ")"};
}

// ------------------------------------------------------------------------ 5

Outcome optimizer_oracle() {
    const SgdHyper h{0.1, 0.9, 0.01};
    std::vector<double> w{0.5}, v{0.0};
    // Hand-iterated: v <- 0.9 v + g + 0.01 w; w <- w - 0.1 v with g = 2 w (loss w^2).
    long double hw = 0.5L, hv = 0.0L;
    double worst = 0.0;
    for (int step = 0; step < 10; ++step) {
        const std::vector<double> g{2.0 * w[0]};
        sgd_update(std::span<double>(w), std::span<double>(v), std::span<const double>(g), h);
        hv = 0.9L * hv + 2.0L * hw + 0.01L * hw;
        hw = hw - 0.1L * hv;
        worst = std::max(worst, static_cast<double>(std::abs(static_cast<long double>(w[0]) - hw)));
    }
    return {worst <= kSgdTol, "10 steps, max deviation " + fmt("%.2e", worst)};
}

// ------------------------------------------------------------------------ 6

Outcome sampler_split_stats() {
    std::ostringstream os;
    bool ok = true;

    // Splits on the 11 x 500 fixture manifest.
    const auto& m = plant_run().data.manifest;
    std::vector<int> seen(m.entries.size(), 0);
    for (Split s : {Split::Train, Split::Val, Split::Test})
        for (auto i : m.indices(s)) ++seen[i];
    const bool partition = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }) && !seen.empty();
    ok &= partition;
    double worst_dev = 0.0;
    for (int cls = 0; cls < m.label_map.size(); ++cls) {
        int n = 0, counts[3] = {0, 0, 0};
        for (const auto& e : m.entries)
            if (e.label == cls) {
                ++n;
                ++counts[static_cast<int>(e.split)];
            }
        for (int s = 0; s < 3; ++s) worst_dev = std::max(worst_dev, std::abs(counts[s] - m.fractions[s] * n));
    }
    ok &= worst_dev <= 1.0;
    os << "partition " << (partition ? "ok" : "broken") << ", max split deviation " << fmt("%.2f", worst_dev);

    // Balanced epochs on an imbalanced manifest.
    std::vector<PatchInfo> infos;
    const int sizes[] = {300, 120, 37, 9, 5};
    for (int cls = 0; cls < 5; ++cls)
        for (int i = 0; i < sizes[cls]; ++i) infos.push_back({"", "s" + std::to_string(infos.size()), cls});
    const auto im = split_dataset(infos, LabelMap({"a", "b", "c", "d", "e"}), Task::Plant, {0.8, 0.1, 0.1}, 3);
    bool uniform = true;
    for (int per_class : {1, 13, 64, 500})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            std::vector<int> count(5, 0);
            const auto e = balanced_epoch(im, Split::Train, per_class, seed);
            for (auto i : e) {
                ++count[static_cast<std::size_t>(im.entries[i].label)];
                uniform &= im.entries[i].split == Split::Train;
            }
            uniform &= std::all_of(count.begin(), count.end(), [&](int c) { return c == per_class; });
        }
    ok &= uniform;
    os << ", balanced epochs " << (uniform ? "uniform" : "NOT uniform");

    // Training set normalised with its own statistics.
    const auto small = make_patch_set(generate_synthetic_set(Task::Plant, 30, 99), Task::Plant, 4,
                                      Granularity::PerImage, StatsScope::Train);
    NormAccumulator acc;
    for (auto i : small.manifest.indices(Split::Train)) acc.add(small.image(i));
    const auto st = acc.finish();
    double worst_mean = 0.0, worst_std = 0.0;
    for (std::size_t b = 0; b < st.channels(); ++b) {
        worst_mean = std::max(worst_mean, std::abs(st.mean[b]));
        worst_std = std::max(worst_std, std::abs(st.std[b] - 1.0));
    }
    ok &= worst_mean <= kNormTol && worst_std <= kNormTol;
    os << ", normalised |mean| " << fmt("%.1e", worst_mean) << " |std-1| " << fmt("%.1e", worst_std);

    // Dihedral closure: every composition is again one of the eight transforms.
    Tensor<float> img({1, 5, 5});
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<float>(i);
    std::vector<Tensor<float>> images;
    for (int t = 0; t < kDihedralCount; ++t) images.push_back(augment(img, t));
    int closed = 0;
    for (int a = 0; a < kDihedralCount; ++a)
        for (int b = 0; b < kDihedralCount; ++b) {
            const auto ab = augment(augment(img, a), b);
            const int c = dihedral_compose(a, b);
            closed += c >= 0 && c < kDihedralCount && ab == images[static_cast<std::size_t>(c)];
        }
    std::set<std::vector<float>> distinct;
    for (const auto& t : images) distinct.insert(t.storage());
    ok &= closed == 64 && distinct.size() == 8;
    os << ", dihedral closure " << closed << "/64";
    return {ok, os.str()};
}

// ------------------------------------------------------------------------ 7

Outcome cam_algebra() {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> classes(2, 11), sizes(0, 3), seeds(0, 1 << 30);
    std::uniform_real_distribution<double> scale(0.5, 1.5), bias(-1.0, 1.0);
    std::normal_distribution<float> normal(0.0f, 1.0f);
    const int edge[] = {32, 40, 48, 64};
    double worst = 0.0;
    int bad_heatmaps = 0, constant_maps = 0;
    for (int k = 0; k < kCamTriples; ++k) {
        const int c = classes(rng);
        auto p = build_model(ModelSpec::tiny(c), static_cast<std::uint64_t>(seeds(rng)));
        for (auto& t : p.tensors)
            if (t.name.find("bn") != std::string::npos && t.name.ends_with(".weight"))
                for (auto& v : t.value.storage()) v = static_cast<float>(scale(rng));
        for (auto& v : p.get("fc.bias").storage()) v = static_cast<float>(bias(rng));
        const int s = edge[sizes(rng)];
        Tensor<float> x({10, s, s});
        for (auto& v : x.storage()) v = normal(rng);
        const int cls = std::uniform_int_distribution<int>(0, c - 1)(rng);
        const auto cam = compute_cam(p, x, cls);
        const double mean =
            std::accumulate(cam.raw_map.begin(), cam.raw_map.end(), 0.0) / static_cast<double>(cam.raw_map.size());
        worst = std::max(worst, std::abs(mean - (cam.logit - cam.bias)));
        const auto [lo, hi] = std::minmax_element(cam.heatmap.begin(), cam.heatmap.end());
        if (cam.constant) {
            ++constant_maps;
        } else if (*lo < 0.0 || *hi > 1.0 || std::abs(*hi - 1.0) > 1e-12) {
            ++bad_heatmaps;
        }
    }
    return {worst <= kCamTol && bad_heatmaps == 0,
            std::to_string(kCamTriples) + " triples, max |mean(raw) - (logit - bias)| " + fmt("%.2e", worst) + ", " +
                std::to_string(bad_heatmaps) + " heatmaps outside [0,1] or max != 1, " +
                std::to_string(constant_maps) + " constant"};
}

// ------------------------------------------------------------------------ 8

Outcome evaluation_protocol() {
    std::vector<PatchInfo> infos;
    const int classes = 11;
    for (int cls = 0; cls < classes; ++cls)
        for (int i = 0; i < 400; ++i) infos.push_back({"", "s" + std::to_string(infos.size()), cls});
    const auto m = split_dataset(infos, LabelMap::plant(), Task::Plant, {0.8, 0.1, 0.1}, 8);
    EvaluationOptions eo;
    eo.n_draws = 10;
    eo.seed = 2;

    const auto perfect = evaluate_classifier(m, [&](std::size_t i) { return m.entries[i].label; }, eo);
    bool identity = true;
    double worst_row = 0.0;
    for (int i = 0; i < classes; ++i) {
        double row = 0.0;
        for (int j = 0; j < classes; ++j) {
            identity &= perfect.mean_confusion[i][j] == (i == j ? 100.0 : 0.0) && perfect.std_confusion[i][j] == 0.0;
            row += perfect.mean_confusion[i][j];
        }
        worst_row = std::max(worst_row, std::abs(row - 100.0));
    }

    std::mt19937 rng(12);
    std::uniform_int_distribution<int> uniform(0, classes - 1);
    const auto random = evaluate_classifier(m, [&](std::size_t) { return uniform(rng); }, eo);
    const double p = 1.0 / classes;
    const double sigma = 100.0 * std::sqrt(p * (1.0 - p) / (static_cast<double>(random.per_class) * eo.n_draws));
    double worst_z = 0.0;
    for (int i = 0; i < classes; ++i) {
        double row = 0.0;
        for (int j = 0; j < classes; ++j) row += random.mean_confusion[i][j];
        worst_row = std::max(worst_row, std::abs(row - 100.0));
        worst_z = std::max(worst_z, std::abs(random.per_class_accuracy[static_cast<std::size_t>(i)] - 100.0 * p) / sigma);
    }
    return {identity && worst_row <= kRowSumTol && worst_z <= kRandomSigmas,
            std::string("perfect classifier ") + (identity ? "identity/zero std" : "NOT identity") +
                ", max row-sum error " + fmt("%.1e", worst_row) + ", random predictor max |z| " + fmt("%.2f", worst_z)};
}

// ------------------------------------------------------------------------ 9

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + PPNET_CLI_PATH + "\" " + args + " >> \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// File contents with volatile fields removed.
std::string comparable(const fs::path& path) {
    const std::string bytes = io::read_file(path);
    if (path.filename() != "train_log.jsonl") return bytes;
    std::istringstream in(bytes);
    std::string line, out;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        j.erase("wall_time");
        out += j.dump() + "\n";
    }
    return out;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file() || e.path().filename() == "run_manifest.json" || e.path().filename() == "cli.log")
            continue;
        out[fs::relative(e.path(), root).generic_string()] = comparable(e.path());
    }
    return out;
}

Outcome cli_determinism() {
    testing::TempDir dir;
    const auto pipeline = [&](const fs::path& root) {
        fs::create_directories(root);
        const auto log = root / "cli.log";
        const std::string r = root.string();
        int rc = run_cli("synth-scenes --sites-per-class 2 --rasters-per-site 3 --cloudy-per-site 1 --scene-size 204 --seed 5 --out " +
                             r + "/scenes",
                         log);
        if (!rc) rc = run_cli("ingest --catalog " + r + "/scenes/catalog.csv --rasters " + r +
                                  "/scenes/rasters --n-rasters 3 --n-background 2 --exclusion-radius 400 --seed 3 --out " + r + "/ingest",
                              log);
        if (!rc) rc = run_cli("build --patches " + r + "/ingest/patches --split-seed 4 --out " + r + "/dataset", log);
        if (!rc) rc = run_cli("train --manifest " + r + "/dataset/manifest.json --model tiny --epochs 2 --per-class 4 --batch-size 8 --seed 6 --out " +
                                  r + "/train",
                              log);
        if (!rc) rc = run_cli("evaluate --checkpoint " + r + "/train/checkpoint.ckpt --manifest " + r +
                                  "/dataset/manifest.json --split val --n-draws 3 --seed 2 --out " + r + "/eval",
                              log);
        return rc;
    };
    const int a = pipeline(dir / "run1");
    const int b = pipeline(dir / "run2");
    if (a != 0 || b != 0)
        return {false, "pipeline exit codes " + std::to_string(a) + " / " + std::to_string(b) + "; see " +
                           (dir / "run1/cli.log").string()};
    const auto s1 = snapshot(dir / "run1"), s2 = snapshot(dir / "run2");
    std::vector<std::string> differ;
    for (const auto& [name, bytes] : s1) {
        const auto it = s2.find(name);
        if (it == s2.end() || it->second != bytes) differ.push_back(name);
    }
    for (const auto& [name, bytes] : s2)
        if (!s1.count(name)) differ.push_back(name);
    const bool covered = s1.count("dataset/manifest.json") && s1.count("train/train_log.jsonl") &&
                         s1.count("eval/report.json") && s1.count("train/checkpoint.ckpt");
    std::ostringstream os;
    os << s1.size() << " files compared across two runs, " << differ.size() << " differ";
    if (!differ.empty()) os << " (first: " << differ.front() << ")";
    return {differ.empty() && covered, os.str()};
}

// ----------------------------------------------------------------------- 10

double oracle_haversine(LatLon a, LatLon b) {
    constexpr double r = 6371008.8;
    const double rad = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * rad, dlon = (b.lon - a.lon) * rad;
    const double h = std::pow(std::sin(dlat / 2), 2) + std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::pow(std::sin(dlon / 2), 2);
    return 2.0 * r * std::asin(std::min(1.0, std::sqrt(h)));
}

// Window origin decoded from the coded raster values of channel 0.
std::pair<int, int> decode_origin(const Patch& p) {
    const long code = std::lround(static_cast<double>(p.pixels[0]) * 1e7);
    return {static_cast<int>(code / 1000), static_cast<int>(code % 1000)};
}

Outcome ingestion_geometry() {
    constexpr int size = 600;
    constexpr double x0 = 440000.0, y0 = 5400000.0;
    const RasterSource raster = testing::coded_raster(size, x0, y0);
    const UtmProjection proj(raster.crs);
    std::mt19937_64 rng(23);

    // Crop centres: the window's geometric centre from the affine map
    // x = x0 + 10 col, y = y0 - 10 row.
    std::uniform_real_distribution<double> ux(x0 + 600.0, x0 + size * 10.0 - 600.0), uy(y0 - size * 10.0 + 600.0, y0 - 600.0);
    double worst = 0.0;
    for (int k = 0; k < kCropCentres; ++k) {
        const MapPoint target{ux(rng), uy(rng)};
        const Patch p = crop_patch(raster, proj.inverse(target));
        const auto [row0, col0] = decode_origin(p);
        const double cx = x0 + 10.0 * (col0 + kPatchSize / 2), cy = y0 - 10.0 * (row0 + kPatchSize / 2);
        worst = std::max(worst, std::hypot(cx - target.x, cy - target.y));
        worst = std::max(worst, oracle_haversine(p.center, proj.inverse(target)));
    }

    // Background centres against four exclusion points.
    const std::vector<LatLon> exclusions{proj.inverse({x0 + 1500.0, y0 - 1500.0}), proj.inverse({x0 + 4000.0, y0 - 2000.0}),
                                         proj.inverse({x0 + 2500.0, y0 - 4500.0}), proj.inverse({x0 + 5000.0, y0 - 5000.0})};
    BackgroundOptions bo;
    bo.exclusion_radius_m = kExclusionRadius;
    bo.max_attempts = 100000;
    int sampled = 0, violations = 0;
    double closest = 1e300;
    for (std::uint64_t batch = 0; sampled < kBackgroundCentres; ++batch) {
        const auto bgs = sample_background(raster, 100, exclusions, batch, bo);
        for (const auto& p : bgs) {
            const auto [row0, col0] = decode_origin(p);
            const LatLon c = proj.inverse({x0 + 10.0 * (col0 + kPatchSize / 2), y0 - 10.0 * (row0 + kPatchSize / 2)});
            for (const auto& e : exclusions) {
                const double d = oracle_haversine(c, e);
                closest = std::min(closest, d);
                violations += d < kExclusionRadius;
            }
            ++sampled;
        }
    }
    std::ostringstream os;
    os << kCropCentres << " crops, worst centre error " << fmt("%.2f", worst) << " m (<= 10); " << sampled
       << " background centres, " << violations << " inside " << kExclusionRadius << " m (closest "
       << fmt("%.1f", closest) << " m)";
    return {worst <= kCropTolMetres && violations == 0, os.str()};
}

// ------------------------------------------------------------------- extras

// How much of the class activation falls on the painted motif, relative to
// its area share. Reported only.
void cam_concentration_note() {
    const auto& run = plant_run();
    if (!run.ready) return;
    const auto& stats = *run.data.manifest.norm_stats;
    double ratio_sum = 0.0;
    int n = 0;
    for (int cls = 0; cls < kPlantClassCount; ++cls)
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto sample = generate_synthetic_with_mask(Task::Plant, cls, 100000 + s);
            const auto cam = compute_cam(run.model, normalize(sample.patch.pixels, stats), cls);
            double inside = 0.0, total = 0.0;
            std::size_t area = 0;
            for (std::size_t i = 0; i < cam.heatmap.size(); ++i) {
                total += cam.heatmap[i];
                if (sample.motif_mask[i]) {
                    inside += cam.heatmap[i];
                    ++area;
                }
            }
            if (area == 0 || total <= 0.0) continue;
            ratio_sum += (inside / total) / (static_cast<double>(area) / static_cast<double>(cam.heatmap.size()));
            ++n;
        }
    if (n) std::printf("INFO   CAM concentration on motifs: %.2fx the area share (mean of %d maps)\n", ratio_sum / n, n);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"synthetic plant end-to-end", synthetic_plant_end_to_end},
        {"synthetic cooling transfer", synthetic_cooling_transfer},
        {"shape suite", shape_suite},
        {"gradient check", gradient_check},
        {"optimizer oracle", optimizer_oracle},
        {"sampler/split/stats invariants", sampler_split_stats},
        {"CAM algebra", cam_algebra},
        {"evaluation protocol", evaluation_protocol},
        {"pipeline determinism", cli_determinism},
        {"ingestion geometry", ingestion_geometry},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %2zu (%s): %s [%.0f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        if (i == 0) cam_concentration_note();
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
