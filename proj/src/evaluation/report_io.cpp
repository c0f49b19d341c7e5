#include "ppnet/evaluation/report_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"

namespace ppnet {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

double parse_double(std::string_view s, int row) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("confusion CSV row " + std::to_string(row) + ": bad number '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

}  // namespace

std::string confusion_csv(const EvaluationReport& report) {
    std::string out = "true\\predicted";
    for (const auto& name : report.label_map.names()) out += "," + name;
    out += "\n";
    for (int a = 0; a < report.classes(); ++a) {
        out += report.label_map.name(a);
        for (int b = 0; b < report.classes(); ++b)
            out += "," + format_double(report.mean_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) + "|" +
                   format_double(report.std_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
        out += "\n";
    }
    return out;
}

ConfusionTable parse_confusion_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("confusion CSV is empty");
    auto header = split_commas(line);
    ConfusionTable t;
    t.classes.assign(header.begin() + 1, header.end());
    const std::size_t c = t.classes.size();
    int row = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const auto cells = split_commas(line);
        if (cells.size() != c + 1)
            throw InputError("confusion CSV row " + std::to_string(row) + ": expected " + std::to_string(c + 1) + " cells");
        std::vector<double> mean, sd;
        for (std::size_t k = 1; k < cells.size(); ++k) {
            const auto bar = cells[k].find('|');
            if (bar == std::string::npos) throw InputError("confusion CSV row " + std::to_string(row) + ": cell without '|'");
            mean.push_back(parse_double(std::string_view(cells[k]).substr(0, bar), row));
            sd.push_back(parse_double(std::string_view(cells[k]).substr(bar + 1), row));
        }
        t.mean.push_back(std::move(mean));
        t.std.push_back(std::move(sd));
    }
    if (t.mean.size() != c) throw InputError("confusion CSV has " + std::to_string(t.mean.size()) + " rows for " + std::to_string(c) + " classes");
    return t;
}

std::string confusion_svg(const EvaluationReport& report) {
    const int c = report.classes();
    const int cell = 56, left = 190, top = 150;
    const int width = left + c * cell + 20, height = top + c * cell + 60;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int a = 0; a < c; ++a) {
        const int y = top + a * cell;
        os << "<text x=\"" << left - 6 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">"
           << xml_escape(report.label_map.name(a)) << "</text>\n";
        for (int b = 0; b < c; ++b) {
            const int x = left + b * cell;
            const double m = report.mean_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            const double s = report.std_confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            const double t = std::clamp(m / 100.0, 0.0, 1.0);
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - 0.8 * t)));
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb("
               << shade << "," << shade << ",255)\" stroke=\"#ccc\"/>\n";
            if (m >= 0.5) {
                std::string label = fixed(m, 1);
                if (s >= 0.5) label += "±" + fixed(s, 1);
                os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
                   << (t > 0.6 ? "white" : "black") << "\">" << label << "</text>\n";
            }
        }
    }
    for (int b = 0; b < c; ++b) {
        const int x = left + b * cell + cell / 2;
        os << "<text transform=\"translate(" << x << "," << top - 8 << ") rotate(-60)\">" << xml_escape(report.label_map.name(b))
           << "</text>\n";
    }
    os << "<text x=\"" << left << "\" y=\"" << height - 20 << "\">Mean accuracy " << fixed(report.overall_accuracy, 1)
       << "% over " << report.n_draws << " balanced draws of " << report.per_class << " per class</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const EvaluationReport& report,
                                                const std::string& stem) {
    std::filesystem::create_directories(dir);
    const auto json_path = dir / (stem + ".json");
    const auto csv_path = dir / (stem + "_confusion.csv");
    const auto svg_path = dir / (stem + "_confusion.svg");
    io::write_json(json_path, report.to_json());
    io::write_file_atomic(csv_path, confusion_csv(report));
    io::write_file_atomic(svg_path, confusion_svg(report));
    return {json_path, csv_path, svg_path};
}

}  // namespace ppnet
