#pragma once

// Multinomial logistic regression on per-band patch means. Used as an
// independent difficulty oracle for the synthetic fixtures: if a linear model
// on ten numbers per patch separates the classes, a CNN has no excuse.

#include <cmath>
#include <vector>

#include "ppnet/ingest/types.hpp"

namespace ppnet::testing {

inline std::vector<double> band_means(const Patch& p) {
    const int c = p.pixels.dim(0);
    const std::size_t plane = static_cast<std::size_t>(p.pixels.dim(1)) * p.pixels.dim(2);
    std::vector<double> out(static_cast<std::size_t>(c));
    for (int b = 0; b < c; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < plane; ++i) s += p.pixels[b * plane + i];
        out[static_cast<std::size_t>(b)] = s / static_cast<double>(plane);
    }
    return out;
}

class LinearProbe {
public:
    /// Full-batch gradient descent on standardised features with a small L2
    /// penalty.
    void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y, int classes, int iterations = 3000,
             double step = 0.5, double l2 = 1e-4) {
        const std::size_t n = x.size(), d = x.front().size();
        classes_ = classes;
        mu_.assign(d, 0.0);
        sd_.assign(d, 0.0);
        for (const auto& r : x)
            for (std::size_t j = 0; j < d; ++j) mu_[j] += r[j] / static_cast<double>(n);
        for (const auto& r : x)
            for (std::size_t j = 0; j < d; ++j) sd_[j] += (r[j] - mu_[j]) * (r[j] - mu_[j]) / static_cast<double>(n);
        for (auto& s : sd_) s = std::sqrt(s) + 1e-12;
        w_.assign(static_cast<std::size_t>(classes) * (d + 1), 0.0);
        std::vector<double> grad(w_.size());
        for (int it = 0; it < iterations; ++it) {
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto z = standardise(x[i]);
                auto p = softmax(z);
                p[static_cast<std::size_t>(y[i])] -= 1.0;
                for (int k = 0; k < classes; ++k) {
                    double* g = grad.data() + static_cast<std::size_t>(k) * (d + 1);
                    for (std::size_t j = 0; j < d; ++j) g[j] += p[static_cast<std::size_t>(k)] * z[j];
                    g[d] += p[static_cast<std::size_t>(k)];
                }
            }
            for (std::size_t q = 0; q < w_.size(); ++q) w_[q] -= step * (grad[q] / static_cast<double>(n) + l2 * w_[q]);
        }
    }

    int predict(const std::vector<double>& x) const {
        const auto p = softmax(standardise(x));
        int best = 0;
        for (int k = 1; k < classes_; ++k)
            if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(best)]) best = k;
        return best;
    }

private:
    std::vector<double> standardise(const std::vector<double>& x) const {
        std::vector<double> z(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mu_[j]) / sd_[j];
        return z;
    }
    std::vector<double> softmax(const std::vector<double>& z) const {
        const std::size_t d = z.size();
        std::vector<double> s(static_cast<std::size_t>(classes_));
        double mx = -1e300;
        for (int k = 0; k < classes_; ++k) {
            const double* w = w_.data() + static_cast<std::size_t>(k) * (d + 1);
            double v = w[d];
            for (std::size_t j = 0; j < d; ++j) v += w[j] * z[j];
            s[static_cast<std::size_t>(k)] = v;
            mx = std::max(mx, v);
        }
        double t = 0.0;
        for (auto& v : s) t += (v = std::exp(v - mx));
        for (auto& v : s) v /= t;
        return s;
    }

    int classes_ = 0;
    std::vector<double> mu_, sd_, w_;
};

/// Holdout accuracy of the probe: first `train_fraction` of each class
/// trains, the rest scores.
inline double probe_holdout_accuracy(const std::vector<Patch>& patches, const std::vector<int>& labels, int classes,
                                     double train_fraction = 0.8) {
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < patches.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    std::vector<std::vector<double>> xtr, xte;
    std::vector<int> ytr, yte;
    for (const auto& members : by_class) {
        const std::size_t cut = static_cast<std::size_t>(train_fraction * static_cast<double>(members.size()));
        for (std::size_t k = 0; k < members.size(); ++k) {
            auto& xs = k < cut ? xtr : xte;
            auto& ys = k < cut ? ytr : yte;
            xs.push_back(band_means(patches[members[k]]));
            ys.push_back(labels[members[k]]);
        }
    }
    LinearProbe probe;
    probe.fit(xtr, ytr, classes);
    int correct = 0;
    for (std::size_t i = 0; i < xte.size(); ++i) correct += probe.predict(xte[i]) == yte[i];
    return static_cast<double>(correct) / static_cast<double>(xte.size());
}

}  // namespace ppnet::testing
