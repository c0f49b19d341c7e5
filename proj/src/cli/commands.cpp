#include "ppnet/cli/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <set>

#include <CLI11.hpp>

#include "ppnet/cli/run_manifest.hpp"
#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"
#include "ppnet/core/random.hpp"
#include "ppnet/dataset/patch_set.hpp"
#include "ppnet/dataset/synthetic.hpp"
#include "ppnet/evaluation/evaluate.hpp"
#include "ppnet/evaluation/report_io.hpp"
#include "ppnet/explain/cam.hpp"
#include "ppnet/explain/visualize.hpp"
#include "ppnet/ingest/catalog.hpp"
#include "ppnet/ingest/patch_io.hpp"
#include "ppnet/ingest/provider.hpp"
#include "ppnet/ingest/raster.hpp"
#include "ppnet/model/checkpoint.hpp"
#include "ppnet/training/trainer.hpp"

namespace ppnet::cli {

namespace fs = std::filesystem;

namespace {

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_') ? c : '_';
    return out;
}

void apply_jobs(int jobs) {
    if (jobs > 0) omp_set_num_threads(jobs);
}

std::vector<fs::path> list_patch_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("patch store not found: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".patch") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string catalog, rasters, endpoint, out;
    double max_cloud = 0.10;
    int n_rasters = 10;
    int n_background = 4;
    int year = 2020;
    double exclusion_radius = 1000.0;
    std::uint64_t seed = 0;
    int jobs = 0;
};

int cmd_ingest(const IngestArgs& a, RunManifest& rm) {
    rm.config = {{"max_cloud", a.max_cloud}, {"n_rasters", a.n_rasters}, {"n_background", a.n_background},
                 {"year", a.year},           {"exclusion_radius_m", a.exclusion_radius}};
    rm.seeds = {{"seed", a.seed}};
    rm.inputs = {a.catalog};
    const auto sites = load_catalog(a.catalog);

    std::unique_ptr<RasterProvider> provider;
    std::string endpoint = a.endpoint;
    if (a.rasters.empty() && endpoint.empty())
        if (const char* env = std::getenv(kEndpointEnv)) endpoint = env;
    if (!a.rasters.empty()) {
        provider = std::make_unique<LocalDirectoryProvider>(a.rasters);
        rm.inputs.push_back(a.rasters);
    } else if (!endpoint.empty()) {
        provider = std::make_unique<HttpCatalogProvider>(endpoint);
        rm.inputs.push_back(endpoint);
    } else {
        throw InputError(std::string("no raster source: pass --rasters, --endpoint or set ") + kEndpointEnv);
    }

    const fs::path out(a.out);
    const fs::path store = out / "patches";
    fs::create_directories(store);
    std::vector<LatLon> exclusions;
    for (const auto& s : sites) exclusions.push_back(s.location);

    int written = 0, unchanged = 0;
    std::set<std::string> seen_rasters;
    nlohmann::json site_log = nlohmann::json::array();
    for (const auto& site : sites) {
        const FetchResult fetched = fetch_rasters(site, a.year, a.max_cloud, a.n_rasters, *provider);
        nlohmann::json entry{{"site_id", site.site_id}, {"rasters", fetched.rasters.size()},
                             {"available", fetched.available}, {"shortfall", fetched.shortfall}};
        nlohmann::json skipped = nlohmann::json::array();
        for (const auto& raster : fetched.rasters) {
            try {
                Patch p = crop_patch(raster, site.location);
                p.site_id = site.site_id;
                p.label = static_cast<int>(site.plant_class);
                if (site.cooling_class) p.cooling_label = static_cast<int>(*site.cooling_class);
                (write_patch(store, safe_name(site.site_id + "__" + raster.raster_id), p) ? written : unchanged)++;
            } catch (const InputError& e) {
                skipped.push_back({{"raster_id", raster.raster_id}, {"reason", e.what()}});
            }
            if (!seen_rasters.insert(raster.raster_id).second) continue;
            try {
                const auto bgs = sample_background(raster, a.n_background, exclusions,
                                                   mix_seed(a.seed, fnv1a64(raster.raster_id)),
                                                   {a.exclusion_radius, 1000});
                for (std::size_t k = 0; k < bgs.size(); ++k)
                    (write_patch(store, safe_name("background__" + raster.raster_id + "__" + std::to_string(k)), bgs[k])
                         ? written
                         : unchanged)++;
            } catch (const InputError& e) {
                skipped.push_back({{"raster_id", raster.raster_id}, {"reason", std::string("background: ") + e.what()}});
            }
        }
        entry["skipped"] = skipped;
        site_log.push_back(entry);
        if (fetched.shortfall)
            std::cerr << "warning: site " << site.site_id << " has " << fetched.rasters.size() << " of " << a.n_rasters
                      << " requested rasters\n";
    }
    const nlohmann::json summary{{"sites", site_log}, {"patches_written", written}, {"patches_unchanged", unchanged}};
    io::write_json(out / "ingest_summary.json", summary);
    rm.outputs = {store.string(), (out / "ingest_summary.json").string()};
    std::cout << "ingested " << sites.size() << " sites: " << written << " patches written, " << unchanged
              << " unchanged\n";
    return kExitOk;
}

// ----------------------------------------------------------------- build

struct BuildArgs {
    std::string patches, out, task = "plant", granularity = "per_image", stats_scope = "all";
    std::uint64_t split_seed = 0;
    int jobs = 0;
};

int cmd_build(const BuildArgs& a, RunManifest& rm) {
    const Task task = parse_task(a.task);
    const Granularity gran = parse_granularity(a.granularity);
    const StatsScope scope = parse_stats_scope(a.stats_scope);
    rm.config = {{"task", std::string(task_name(task))}, {"granularity", a.granularity}, {"stats_scope", a.stats_scope}};
    rm.seeds = {{"split_seed", a.split_seed}};
    rm.inputs = {a.patches};

    const auto files = list_patch_files(a.patches);
    std::vector<PatchInfo> infos;
    for (const auto& f : files) {
        const Patch p = read_patch(f);
        if (task == Task::Cooling && !p.cooling_label) continue;
        infos.push_back({fs::absolute(f).lexically_normal().string(), p.site_id, task_label(p, task)});
    }
    if (infos.empty()) throw InputError("patch store " + a.patches + " has no patches for task " + a.task);
    DatasetManifest m = split_dataset(infos, LabelMap::for_task(task), task, {0.8, 0.1, 0.1}, a.split_seed, gran);
    m.stats_scope = std::string(stats_scope_name(scope));
    m.norm_stats = stats_from_manifest(m, scope);
    const fs::path path = fs::path(a.out) / "manifest.json";
    m.save(path);
    rm.outputs = {path.string()};
    std::cout << path.string() << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- train

struct TrainArgs {
    std::string manifest, config, task, pretrained, out, model;
    std::optional<int> epochs, per_class, batch_size;
    std::optional<double> learning_rate;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    bool freeze_backbone = false;
    int jobs = 0;
};

int cmd_train(const TrainArgs& a, RunManifest& rm) {
    TrainConfig cfg = a.config.empty() ? TrainConfig{} : TrainConfig::load(a.config);
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        cfg.set_text(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const DatasetManifest manifest = DatasetManifest::load(a.manifest);
    cfg.task = a.task.empty() ? manifest.task : parse_task(a.task);
    if (!a.model.empty()) cfg.model = a.model;
    if (!a.pretrained.empty()) cfg.pretrained = a.pretrained;
    if (a.epochs) cfg.epochs = *a.epochs;
    if (a.per_class) cfg.per_class = *a.per_class;
    if (a.batch_size) cfg.batch_size = *a.batch_size;
    if (a.learning_rate) cfg.learning_rate = *a.learning_rate;
    if (a.seed) cfg.init_seed = cfg.sampler_seed = *a.seed;
    if (a.freeze_backbone) cfg.freeze_backbone = true;
    cfg.validate();
    rm.config = cfg.to_json();
    rm.seeds = {{"init_seed", cfg.init_seed}, {"sampler_seed", cfg.sampler_seed}};
    rm.inputs = {a.manifest};

    if (manifest.task != cfg.task)
        throw InputError("manifest task '" + std::string(task_name(manifest.task)) + "' differs from --task '" +
                         std::string(task_name(cfg.task)) + "'");
    if (cfg.task == Task::Cooling && !cfg.pretrained)
        std::cerr << "warning: training the cooling task without --pretrained; transfer from a plant-task model is the "
                     "intended protocol\n";
    const PatchSet data = load_patch_set(manifest);

    const fs::path out(a.out);
    fs::create_directories(out);
    io::write_json(out / "config.json", cfg.to_json());
    TrainOptions opts;
    opts.out_dir = out;
    opts.on_epoch = [](const EpochRecord& r) {
        std::cerr << "epoch " << r.epoch << " loss " << r.train_loss << " val_accuracy " << r.val_accuracy << " lr "
                  << r.learning_rate << "\n";
    };
    TrainResult result;
    if (cfg.pretrained) {
        rm.inputs.push_back(*cfg.pretrained);
        const ModelParams pre = load_checkpoint(*cfg.pretrained);
        if (cfg.task == Task::Cooling) {
            result = train_cooling(data, pre, cfg, opts);
        } else {
            ModelParams init = transfer_head(pre, data.num_classes(), cfg.init_seed);
            result = train(data, cfg, opts, &init);
        }
    } else {
        result = train(data, cfg, opts);
    }
    rm.outputs = {result.checkpoint.string(), (out / "train_log.jsonl").string(), (out / "config.json").string()};
    std::cout << "best val accuracy " << result.state.best_val_accuracy << " at epoch " << result.state.best_epoch
              << "; checkpoint " << result.checkpoint.string() << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string checkpoint, manifest, out, split = "test";
    int n_draws = 10;
    int per_class = 0;
    std::uint64_t seed = 0;
    int jobs = 0;
};

int cmd_evaluate(const EvaluateArgs& a, RunManifest& rm) {
    rm.config = {{"n_draws", a.n_draws}, {"per_class", a.per_class}, {"split", a.split}};
    rm.seeds = {{"seed", a.seed}};
    rm.inputs = {a.checkpoint, a.manifest};
    if (!fs::exists(a.checkpoint)) throw InputError("checkpoint not found: " + a.checkpoint);
    const ModelParams params = load_checkpoint(a.checkpoint);
    const PatchSet data = load_patch_set(DatasetManifest::load(a.manifest));
    EvaluationOptions opts;
    opts.split = parse_split(a.split);
    opts.n_draws = a.n_draws;
    opts.per_class = a.per_class;
    opts.seed = a.seed;
    const EvaluationReport report = data.manifest.task == Task::Cooling ? evaluate_cooling(params, data, opts)
                                                                         : evaluate(params, data, opts);
    const auto paths = write_report(a.out, report);
    for (const auto& p : paths) rm.outputs.push_back(p.string());
    std::cout << "overall accuracy " << report.overall_accuracy << "% over " << report.n_draws << " draws of "
              << report.per_class << " per class\n";
    return kExitOk;
}

// ------------------------------------------------------------------- cam

struct CamArgs {
    std::string checkpoint, input, out, manifest;
    std::optional<int> class_index;
    double alpha = 0.5;
    int jobs = 0;
};

int cmd_cam(const CamArgs& a, RunManifest& rm) {
    rm.config = {{"alpha", a.alpha}, {"class", a.class_index ? nlohmann::json(*a.class_index) : nlohmann::json(nullptr)}};
    rm.inputs = {a.checkpoint, a.input};
    if (!fs::exists(a.checkpoint)) throw InputError("checkpoint not found: " + a.checkpoint);
    const ModelParams params = load_checkpoint(a.checkpoint);
    const int classes = params.spec.num_classes;
    if (a.class_index && (*a.class_index < 0 || *a.class_index >= classes))
        throw InputError("--class " + std::to_string(*a.class_index) + " outside [0, " + std::to_string(classes) + ")");

    NormStats stats;
    if (!a.manifest.empty()) {
        const auto m = DatasetManifest::load(a.manifest);
        if (!m.norm_stats) throw InputError("manifest has no normalisation statistics");
        stats = *m.norm_stats;
    } else if (params.metadata.contains("norm_stats") && !params.metadata["norm_stats"].is_null()) {
        stats = NormStats::from_json(params.metadata["norm_stats"]);
    } else {
        throw InputError("checkpoint carries no normalisation statistics; pass --manifest");
    }
    LabelMap labels = classes == LabelMap::cooling().size() ? LabelMap::cooling() : LabelMap::plant();
    if (params.metadata.contains("label_map")) labels = LabelMap::from_json(params.metadata["label_map"]);

    std::vector<fs::path> inputs;
    if (fs::is_directory(a.input)) inputs = list_patch_files(a.input);
    else if (fs::exists(a.input)) inputs = {a.input};
    else throw InputError("input not found: " + a.input);

    for (const auto& path : inputs) {
        const Patch p = read_patch(path);
        const CamResult cam = compute_cam(params, normalize(p.pixels, stats), a.class_index);
        const auto outs = write_cam_outputs(a.out, path.stem().string(), p.pixels, cam, labels.name(cam.class_index),
                                            a.alpha, {{"patch", path.filename().string()}, {"site_id", p.site_id}});
        for (const auto& o : outs) rm.outputs.push_back(o.string());
    }
    std::cout << "wrote class activation maps for " << inputs.size() << " patches\n";
    return kExitOk;
}

// ------------------------------------------------------------- synthetic

struct SynthPatchArgs {
    std::string task = "plant", out;
    int per_class = 20;
    std::uint64_t seed = 0;
    int jobs = 0;
};

int cmd_synth_patches(const SynthPatchArgs& a, RunManifest& rm) {
    const Task task = parse_task(a.task);
    if (a.per_class <= 0) throw InputError("--per-class must be positive");
    rm.config = {{"task", std::string(task_name(task))}, {"per_class", a.per_class}};
    rm.seeds = {{"seed", a.seed}};
    const fs::path store = fs::path(a.out) / "patches";
    const auto patches = generate_synthetic_set(task, a.per_class, a.seed);
    const LabelMap labels = LabelMap::for_task(task);
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const int cls = static_cast<int>(i) / a.per_class;
        char idx[32];
        std::snprintf(idx, sizeof(idx), "%05zu", i % static_cast<std::size_t>(a.per_class));
        write_patch(store, safe_name(labels.name(cls)) + "_" + idx, patches[i]);
    }
    rm.outputs = {store.string()};
    std::cout << "wrote " << patches.size() << " synthetic patches to " << store.string() << "\n";
    return kExitOk;
}

struct SynthSceneArgs {
    std::string out;
    int sites_per_class = 1;
    int rasters_per_site = 3;
    int cloudy_per_site = 1;
    int scene_size = 300;
    std::uint64_t seed = 0;
    int jobs = 0;
};

int cmd_synth_scenes(const SynthSceneArgs& a, RunManifest& rm) {
    if (a.sites_per_class <= 0) throw InputError("--sites-per-class must be positive");
    rm.config = {{"sites_per_class", a.sites_per_class}, {"rasters_per_site", a.rasters_per_site},
                 {"cloudy_per_site", a.cloudy_per_site}, {"scene_size", a.scene_size}};
    rm.seeds = {{"seed", a.seed}};
    const fs::path out(a.out);
    const auto sites = fixture_catalog(a.sites_per_class, a.seed);
    write_catalog(out / "catalog.csv", sites);
    FixtureSceneOptions opts;
    opts.scene_size = a.scene_size;
    opts.rasters_per_site = a.rasters_per_site;
    opts.cloudy_per_site = a.cloudy_per_site;
    const int n = write_fixture_scenes(out / "rasters", sites, a.seed, opts);
    rm.outputs = {(out / "catalog.csv").string(), (out / "rasters").string()};
    std::cout << "wrote " << sites.size() << " sites and " << n << " rasters under " << out.string() << "\n";
    return kExitOk;
}

template <typename F>
int guarded(const std::string& out_dir, RunManifest& rm, F&& body) {
    int code = kExitFailure;
    try {
        code = body();
    } catch (const CatalogError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& issue : e.issues())
            std::cerr << "  row " << issue.row << ", " << issue.field << ": " << issue.message << "\n";
        rm.error = e.what();
        code = kExitInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rm.error = e.what();
        code = kExitInput;
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        rm.error = e.what();
        code = kExitProvider;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        rm.error = e.what();
        code = kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rm.error = e.what();
        code = kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        rm.error = e.what();
        code = kExitFailure;
    }
    rm.exit_status = code;
    if (!out_dir.empty()) {
        try {
            rm.write(out_dir);
        } catch (const std::exception& e) {
            std::cerr << "warning: could not write run manifest: " << e.what() << "\n";
        }
    }
    return code;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Power plant classification from multispectral imagery", "ppnet"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    RunManifest rm;
    for (int i = 0; i < argc; ++i) rm.argv.emplace_back(argv[i]);

    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "Crop site and background patches from rasters");
    ingest->add_option("--catalog", ia.catalog, "Site catalogue CSV")->required();
    ingest->add_option("--rasters", ia.rasters, "Directory of raster folders (local provider)");
    ingest->add_option("--endpoint", ia.endpoint, std::string("HTTP raster catalogue (default: $") + kEndpointEnv + ")");
    ingest->add_option("--out", ia.out, "Output directory")->required();
    ingest->add_option("--max-cloud", ia.max_cloud, "Maximum cloud cover fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    ingest->add_option("--n-rasters", ia.n_rasters, "Rasters per site")->capture_default_str()->check(CLI::PositiveNumber);
    ingest->add_option("--n-background", ia.n_background, "Background patches per raster")->capture_default_str()->check(CLI::NonNegativeNumber);
    ingest->add_option("--year", ia.year, "Acquisition year")->capture_default_str();
    ingest->add_option("--exclusion-radius", ia.exclusion_radius, "Background distance to any site, metres")->capture_default_str();
    ingest->add_option("--seed", ia.seed, "Background sampling seed")->capture_default_str();
    ingest->add_option("--jobs", ia.jobs, "Worker threads (0: runtime default)");

    BuildArgs ba;
    auto* build = app.add_subcommand("build", "Split a patch store and compute normalisation statistics");
    build->add_option("--patches", ba.patches, "Patch store directory")->required();
    build->add_option("--out", ba.out, "Output directory (manifest.json)")->required();
    build->add_option("--task", ba.task, "plant or cooling")->capture_default_str();
    build->add_option("--split-seed", ba.split_seed, "Split seed")->capture_default_str();
    build->add_option("--granularity", ba.granularity, "per_image or per_site")->capture_default_str();
    build->add_option("--stats-scope", ba.stats_scope, "all or train")->capture_default_str();
    build->add_option("--jobs", ba.jobs, "Worker threads (0: runtime default)");

    TrainArgs ta;
    auto* trn = app.add_subcommand("train", "Train a classifier on a dataset manifest");
    trn->add_option("--manifest", ta.manifest, "Dataset manifest")->required();
    trn->add_option("--config", ta.config, "Training config (JSON or key = value lines)");
    trn->add_option("--task", ta.task, "plant or cooling (default: the manifest's task)");
    trn->add_option("--pretrained", ta.pretrained, "Checkpoint to initialise the backbone from");
    trn->add_option("--out", ta.out, "Output directory")->required();
    trn->add_option("--model", ta.model, "Model preset: resnet50, small or tiny");
    trn->add_option("--epochs", ta.epochs, "Maximum epochs");
    trn->add_option("--per-class", ta.per_class, "Balanced draw per class and epoch");
    trn->add_option("--batch-size", ta.batch_size, "Minibatch size");
    trn->add_option("--lr", ta.learning_rate, "Learning rate");
    trn->add_option("--seed", ta.seed, "Initialisation and sampling seed");
    trn->add_option("--set", ta.overrides, "Config override key=value (repeatable)");
    trn->add_flag("--freeze-backbone", ta.freeze_backbone, "Train only the classification head");
    trn->add_option("--jobs", ta.jobs, "Worker threads (0: runtime default)");

    EvaluateArgs ea;
    auto* evl = app.add_subcommand("evaluate", "Balanced-draw confusion statistics of a checkpoint");
    evl->add_option("--checkpoint", ea.checkpoint, "Model checkpoint")->required();
    evl->add_option("--manifest", ea.manifest, "Dataset manifest")->required();
    evl->add_option("--out", ea.out, "Output directory")->required();
    evl->add_option("--split", ea.split, "train, val or test")->capture_default_str();
    evl->add_option("--n-draws", ea.n_draws, "Number of balanced draws")->capture_default_str();
    evl->add_option("--per-class", ea.per_class, "Draw size per class (0: smallest class)")->capture_default_str();
    evl->add_option("--seed", ea.seed, "Draw seed")->capture_default_str();
    evl->add_option("--jobs", ea.jobs, "Worker threads (0: runtime default)");

    CamArgs ca;
    auto* cam = app.add_subcommand("cam", "Class activation maps for a patch or a directory of patches");
    cam->add_option("--checkpoint", ca.checkpoint, "Model checkpoint")->required();
    cam->add_option("--input", ca.input, "Patch file (.patch) or directory")->required();
    cam->add_option("--out", ca.out, "Output directory")->required();
    cam->add_option("--class", ca.class_index, "Class index (default: predicted class)");
    cam->add_option("--alpha", ca.alpha, "Overlay opacity")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cam->add_option("--manifest", ca.manifest, "Manifest supplying normalisation statistics");
    cam->add_option("--jobs", ca.jobs, "Worker threads (0: runtime default)");

    SynthPatchArgs spa;
    auto* sp = app.add_subcommand("synth-patches", "Write a synthetic patch store");
    sp->add_option("--task", spa.task, "plant or cooling")->capture_default_str();
    sp->add_option("--per-class", spa.per_class, "Patches per class")->capture_default_str();
    sp->add_option("--seed", spa.seed, "Generator seed")->capture_default_str();
    sp->add_option("--out", spa.out, "Output directory")->required();
    sp->add_option("--jobs", spa.jobs, "Worker threads (0: runtime default)");

    SynthSceneArgs ssa;
    auto* ss = app.add_subcommand("synth-scenes", "Write a fixture catalogue and raster directory");
    ss->add_option("--sites-per-class", ssa.sites_per_class, "Sites per plant class")->capture_default_str();
    ss->add_option("--rasters-per-site", ssa.rasters_per_site, "Clear acquisitions per site")->capture_default_str();
    ss->add_option("--cloudy-per-site", ssa.cloudy_per_site, "Cloudy acquisitions per site")->capture_default_str();
    ss->add_option("--scene-size", ssa.scene_size, "Scene edge in 10 m pixels (multiple of 6)")->capture_default_str();
    ss->add_option("--seed", ssa.seed, "Generator seed")->capture_default_str();
    ss->add_option("--out", ssa.out, "Output directory")->required();
    ss->add_option("--jobs", ssa.jobs, "Worker threads (0: runtime default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (ingest->parsed()) {
        rm.command = "ingest";
        apply_jobs(ia.jobs);
        return guarded(ia.out, rm, [&] { return cmd_ingest(ia, rm); });
    }
    if (build->parsed()) {
        rm.command = "build";
        apply_jobs(ba.jobs);
        return guarded(ba.out, rm, [&] { return cmd_build(ba, rm); });
    }
    if (trn->parsed()) {
        rm.command = "train";
        apply_jobs(ta.jobs);
        return guarded(ta.out, rm, [&] { return cmd_train(ta, rm); });
    }
    if (evl->parsed()) {
        rm.command = "evaluate";
        apply_jobs(ea.jobs);
        return guarded(ea.out, rm, [&] { return cmd_evaluate(ea, rm); });
    }
    if (cam->parsed()) {
        rm.command = "cam";
        apply_jobs(ca.jobs);
        return guarded(ca.out, rm, [&] { return cmd_cam(ca, rm); });
    }
    if (sp->parsed()) {
        rm.command = "synth-patches";
        apply_jobs(spa.jobs);
        return guarded(spa.out, rm, [&] { return cmd_synth_patches(spa, rm); });
    }
    rm.command = "synth-scenes";
    apply_jobs(ssa.jobs);
    return guarded(ssa.out, rm, [&] { return cmd_synth_scenes(ssa, rm); });
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("ppnet");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ppnet::cli
