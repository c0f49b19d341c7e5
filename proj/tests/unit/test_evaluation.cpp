#include <doctest.h>

#include <cmath>
#include <random>

#include "ppnet/core/io.hpp"
#include "ppnet/dataset/manifest.hpp"
#include "ppnet/dataset/sampling.hpp"
#include "ppnet/evaluation/evaluate.hpp"
#include "ppnet/evaluation/report_io.hpp"
#include "support/temp_dir.hpp"

using namespace ppnet;

namespace {

DatasetManifest toy_manifest(int classes, int per_class) {
    std::vector<PatchInfo> in;
    std::vector<std::string> names;
    for (int c = 0; c < classes; ++c) {
        names.push_back("class" + std::to_string(c));
        for (int i = 0; i < per_class; ++i) in.push_back({"", "s" + std::to_string(c) + "_" + std::to_string(i), c});
    }
    return split_dataset(in, LabelMap(names), Task::Plant, {0.5, 0.1, 0.4}, 3);
}

}  // namespace

TEST_CASE("a perfect classifier yields the identity with zero spread") {
    const auto m = toy_manifest(4, 30);
    EvaluationOptions opt;
    opt.n_draws = 5;
    const auto r = evaluate_classifier(m, [&](std::size_t i) { return m.entries[i].label; }, opt);
    CHECK(r.per_class == min_class_size(m, Split::Test));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(r.mean_confusion[i][j] == (i == j ? 100.0 : 0.0));
            CHECK(r.std_confusion[i][j] == 0.0);
        }
    CHECK(r.overall_accuracy == 100.0);
}

TEST_CASE("a uniform random predictor stays within sampling error of 1/C") {
    const int classes = 5;
    const auto m = toy_manifest(classes, 100);
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> u(0, classes - 1);
    EvaluationOptions opt;
    opt.n_draws = 10;
    opt.seed = 8;
    const auto r = evaluate_classifier(m, [&](std::size_t) { return u(rng); }, opt);
    const double p = 1.0 / classes;
    // Each cell averages n_draws binomial(per_class, p) percentages.
    const double sigma = 100.0 * std::sqrt(p * (1 - p) / r.per_class / opt.n_draws);
    for (int i = 0; i < classes; ++i) {
        double row = 0.0;
        for (int j = 0; j < classes; ++j) {
            row += r.mean_confusion[i][j];
            CHECK(std::abs(r.mean_confusion[i][j] - 100.0 * p) <= 4.0 * sigma);
        }
        CHECK(row == doctest::Approx(100.0));
    }
}

TEST_CASE("draws follow the balanced sampler and classifier call order") {
    const auto m = toy_manifest(3, 40);
    std::vector<std::size_t> seen;
    EvaluationOptions opt;
    opt.n_draws = 2;
    opt.per_class = 5;
    opt.seed = 1;
    evaluate_classifier(m, [&](std::size_t i) {
        seen.push_back(i);
        return 0;
    }, opt);
    auto expect = balanced_epoch(m, Split::Test, 5, epoch_seed(1, 0));
    const auto second = balanced_epoch(m, Split::Test, 5, epoch_seed(1, 1));
    expect.insert(expect.end(), second.begin(), second.end());
    CHECK(seen == expect);
}

TEST_CASE("confusion csv round-trips exactly and the svg is well formed") {
    const auto m = toy_manifest(3, 40);
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> u(0, 2);
    EvaluationOptions opt;
    opt.n_draws = 4;
    const auto r = evaluate_classifier(m, [&](std::size_t i) { return u(rng) == 0 ? u(rng) : m.entries[i].label; }, opt);
    const auto t = parse_confusion_csv(confusion_csv(r));
    CHECK(t.classes == r.label_map.names());
    CHECK(t.mean == r.mean_confusion);
    CHECK(t.std == r.std_confusion);
    CHECK(confusion_csv(r).rfind("true\\predicted,class0,class1,class2\n", 0) == 0);
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);

    const auto svg = confusion_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("class2") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    const auto back = EvaluationReport::from_json(r.to_json());
    CHECK(back.mean_confusion == r.mean_confusion);
    CHECK(back.per_class_accuracy == r.per_class_accuracy);
    CHECK(back.label_map == r.label_map);

    testing::TempDir dir;
    const auto files = write_report(dir.path(), r, "eval");
    CHECK(files.size() == 3);
    CHECK(io::read_json(dir / "eval.json").at("n_draws") == 4);
    CHECK_THROWS_AS(parse_confusion_csv("true\\predicted,a,b\na,1|0\n"), InputError);
}
