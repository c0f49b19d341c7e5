#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ppnet/evaluation/evaluate.hpp"

namespace ppnet {

/// Confusion CSV: a header row "true\predicted,<class names>", then one row
/// per true class: the class name followed by "mean|std" cells. Numbers are
/// written in shortest round-trip form, so parsing restores them exactly.
std::string confusion_csv(const EvaluationReport& report);

struct ConfusionTable {
    std::vector<std::string> classes;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> std;
};
ConfusionTable parse_confusion_csv(const std::string& text);

/// Heat-map of the mean confusion with class-name axes. Cells with a mean of
/// at least 0.5 points are annotated; "±std" is appended when the std is at
/// least 0.5 points.
std::string confusion_svg(const EvaluationReport& report);

/// Writes <stem>.json, <stem>_confusion.csv and <stem>_confusion.svg under
/// `dir`. Returns the written paths.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const EvaluationReport& report,
                                                const std::string& stem = "report");

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace ppnet
