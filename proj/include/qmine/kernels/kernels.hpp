#pragma once

#include <cstddef>

namespace qmine::kernels {

// Dense float kernels behind the trainer. Every entry point has a scalar
// reference implementation; on x86-64 an AVX2 variant is selected at runtime
// when the CPU supports it. Matrices are row-major with leading dimension
// equal to the column count.
struct Ops {
    float (*dot)(const float* a, const float* b, size_t n);
    // y += alpha * x
    void (*axpy)(float alpha, const float* x, float* y, size_t n);
    void (*scale)(float* x, size_t n, float alpha);
    float (*sum)(const float* x, size_t n);
    // c[m x n] = a[m x k] * b[k x n]; adds into c when accumulate is set
    void (*matmul_nn)(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate);
    // c[m x n] = transpose(a)[m x k] * b[k x n], a stored as [k x m]
    void (*matmul_tn)(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate);
    // c[m x n] = a[m x k] * transpose(b)[k x n], b stored as [n x k]
    void (*matmul_nt)(size_t m, size_t n, size_t k, const float* a, const float* b,
                      float* c, bool accumulate);
    void (*softmax_rows)(float* x, size_t rows, size_t cols);
    void (*relu_inplace)(float* x, size_t n);
    // grad[i] = 0 where activ[i] <= 0
    void (*relu_backward)(const float* activ, float* grad, size_t n);
    // m = b1*m + (1-b1)*g; v = b2*v + (1-b2)*g*g;
    // w -= lr * (m*inv_bc1) / (sqrt(v*inv_bc2) + eps)
    void (*adam_step)(float* w, const float* g, float* m, float* v, size_t n,
                      float lr, float beta1, float beta2, float eps,
                      float inv_bc1, float inv_bc2);
};

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool avx2_available();

const Ops& scalar_ops();
const Ops& avx2_ops();  // callable only when avx2_available()

// Dispatch result, honoring the QMINE_KERNEL_ISA env override
// ("scalar" or "avx2"). Resolved once per process.
const Ops& active_ops();
Isa active_isa();

}  // namespace qmine::kernels
