#include "ppnet/dataset/augment.hpp"

#include <array>

#include "ppnet/core/error.hpp"

namespace ppnet {

namespace {

// Integer 2x2 matrix acting on centred pixel coordinates (u, v), where
// u = 2 * row - (n - 1) and v = 2 * col - (n - 1).
using Mat = std::array<int, 4>;

constexpr Mat kRotate{0, -1, 1, 0};  // quarter turn counter-clockwise
constexpr Mat kMirror{1, 0, 0, -1};  // left-right
constexpr Mat kIdentity{1, 0, 0, 1};

constexpr Mat mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat matrix_of(int id) {
    if (id < 0 || id >= kDihedralCount) throw InputError("invalid transform id " + std::to_string(id) + " (0-7)");
    Mat m = (id >= 4) ? kMirror : kIdentity;
    for (int r = 0; r < id % 4; ++r) m = mul(kRotate, m);
    return m;
}

int id_of(const Mat& m) {
    for (int id = 0; id < kDihedralCount; ++id)
        if (matrix_of(id) == m) return id;
    throw Error("dihedral matrix outside the group");
}

}  // namespace

int dihedral_compose(int first, int second) { return id_of(mul(matrix_of(second), matrix_of(first))); }

int dihedral_inverse(int transform_id) {
    for (int id = 0; id < kDihedralCount; ++id)
        if (dihedral_compose(transform_id, id) == 0) return id;
    throw Error("dihedral inverse not found");
}

template <typename T>
Tensor<T> augment(const Tensor<T>& image, int transform_id) {
    const Mat fwd = matrix_of(transform_id);
    if (image.rank() != 3 || image.dim(1) != image.dim(2))
        throw InputError("augment needs a square channel x row x column array, got " + shape_string(image.shape()));
    if (transform_id == 0) return image;
    // Output pixel p receives input pixel M^-1 p. For orthogonal integer
    // matrices the inverse is the transpose.
    const Mat inv{fwd[0], fwd[2], fwd[1], fwd[3]};
    const int c = image.dim(0), n = image.dim(1);
    Tensor<T> out(image.shape());
    const std::size_t plane = static_cast<std::size_t>(n) * n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int u = 2 * i - (n - 1), v = 2 * j - (n - 1);
            const int su = inv[0] * u + inv[1] * v, sv = inv[2] * u + inv[3] * v;
            const std::size_t src = static_cast<std::size_t>((su + n - 1) / 2) * n + (sv + n - 1) / 2;
            const std::size_t dst = static_cast<std::size_t>(i) * n + j;
            for (int ch = 0; ch < c; ++ch) out.data()[ch * plane + dst] = image.data()[ch * plane + src];
        }
    }
    return out;
}

template Tensor<float> augment<float>(const Tensor<float>&, int);
template Tensor<double> augment<double>(const Tensor<double>&, int);

}  // namespace ppnet
