#include "ppnet/training/loss.hpp"

#include <cmath>

#include "ppnet/core/error.hpp"

namespace ppnet {

template <typename T>
double cross_entropy(const Tensor<T>& logits, std::span<const int> labels, Tensor<T>* grad) {
    if (logits.rank() != 2) throw InputError("cross_entropy expects N x C logits");
    const int n = logits.dim(0), c = logits.dim(1);
    if (static_cast<std::size_t>(n) != labels.size())
        throw InputError("cross_entropy: " + std::to_string(labels.size()) + " labels for " + std::to_string(n) + " rows");
    if (n == 0) throw InputError("cross_entropy of an empty batch");
    if (grad) *grad = Tensor<T>(logits.shape());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const int y = labels[static_cast<std::size_t>(i)];
        if (y < 0 || y >= c)
            throw InputError("label " + std::to_string(y) + " outside [0, " + std::to_string(c) + ")");
        const T* row = logits.data() + static_cast<std::size_t>(i) * c;
        double mx = row[0];
        for (int j = 1; j < c; ++j) mx = std::max(mx, static_cast<double>(row[j]));
        double sum = 0.0;
        for (int j = 0; j < c; ++j) sum += std::exp(row[j] - mx);
        const double log_z = mx + std::log(sum);
        total += log_z - row[y];
        if (grad) {
            T* g = grad->data() + static_cast<std::size_t>(i) * c;
            for (int j = 0; j < c; ++j) {
                const double p = std::exp(row[j] - log_z);
                g[j] = static_cast<T>((p - (j == y ? 1.0 : 0.0)) / n);
            }
        }
    }
    return total / n;
}

template double cross_entropy(const Tensor<float>&, std::span<const int>, Tensor<float>*);
template double cross_entropy(const Tensor<double>&, std::span<const int>, Tensor<double>*);

}  // namespace ppnet
