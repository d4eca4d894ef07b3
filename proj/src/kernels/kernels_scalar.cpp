#include <cmath>
#include <cstring>

#include "qmine/kernels/kernels.hpp"

namespace qmine::kernels {
namespace {

float dot_scalar(const float* a, const float* b, size_t n) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(float* x, size_t n, float alpha) {
    for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

float sum_scalar(const float* x, size_t n) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void matmul_nn_scalar(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        float* crow = c + i * n;
        if (!accumulate) std::memset(crow, 0, n * sizeof(float));
        for (size_t l = 0; l < k; ++l) {
            const float ail = a[i * k + l];
            if (ail == 0.0f) continue;
            const float* brow = b + l * n;
            for (size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
        }
    }
}

void matmul_tn_scalar(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        float* crow = c + i * n;
        if (!accumulate) std::memset(crow, 0, n * sizeof(float));
        for (size_t l = 0; l < k; ++l) {
            const float ali = a[l * m + i];
            if (ali == 0.0f) continue;
            const float* brow = b + l * n;
            for (size_t j = 0; j < n; ++j) crow[j] += ali * brow[j];
        }
    }
}

void matmul_nt_scalar(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        const float* arow = a + i * k;
        for (size_t j = 0; j < n; ++j) {
            float acc = dot_scalar(arow, b + j * k, k);
            if (accumulate)
                c[i * n + j] += acc;
            else
                c[i * n + j] = acc;
        }
    }
}

void softmax_rows_scalar(float* x, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        float* row = x + r * cols;
        float mx = row[0];
        for (size_t j = 1; j < cols; ++j)
            if (row[j] > mx) mx = row[j];
        float total = 0.0f;
        for (size_t j = 0; j < cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            total += row[j];
        }
        const float inv = 1.0f / total;
        for (size_t j = 0; j < cols; ++j) row[j] *= inv;
    }
}

void relu_inplace_scalar(float* x, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (x[i] < 0.0f) x[i] = 0.0f;
}

void relu_backward_scalar(const float* activ, float* grad, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (activ[i] <= 0.0f) grad[i] = 0.0f;
}

void adam_step_scalar(float* w, const float* g, float* m, float* v, size_t n,
                      float lr, float beta1, float beta2, float eps,
                      float inv_bc1, float inv_bc2) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        const float mhat = m[i] * inv_bc1;
        const float vhat = v[i] * inv_bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        dot_scalar,         axpy_scalar,       scale_scalar,
        sum_scalar,         matmul_nn_scalar,  matmul_tn_scalar,
        matmul_nt_scalar,   softmax_rows_scalar, relu_inplace_scalar,
        relu_backward_scalar, adam_step_scalar,
    };
    return ops;
}

}  // namespace qmine::kernels
