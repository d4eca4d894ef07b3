#include <cmath>
#include <cstdlib>
#include <cstring>

#include "qmine/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define QMINE_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define QMINE_HAVE_AVX2_BUILD 0
#endif

namespace qmine::kernels {

#if QMINE_HAVE_AVX2_BUILD

namespace {

inline float hsum256(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 1));
    return _mm_cvtss_f32(lo);
}

inline float hmax256(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_max_ps(lo, hi);
    lo = _mm_max_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_max_ss(lo, _mm_shuffle_ps(lo, lo, 1));
    return _mm_cvtss_f32(lo);
}

float dot_avx2(const float* a, const float* b, size_t n) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
    float total = hsum256(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_avx2(float alpha, const float* x, float* y, size_t n) {
    const __m256 va = _mm256_set1_ps(alpha);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
        _mm256_storeu_ps(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(float* x, size_t n, float alpha) {
    const __m256 va = _mm256_set1_ps(alpha);
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), va));
    for (; i < n; ++i) x[i] *= alpha;
}

float sum_avx2(const float* x, size_t n) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float total = hsum256(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

inline void row_saxpy(float a, const float* src, float* dst, size_t n) {
    const __m256 va = _mm256_set1_ps(a);
    size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        __m256 vd = _mm256_fmadd_ps(va, _mm256_loadu_ps(src + j), _mm256_loadu_ps(dst + j));
        _mm256_storeu_ps(dst + j, vd);
    }
    for (; j < n; ++j) dst[j] += a * src[j];
}

void matmul_nn_avx2(size_t m, size_t n, size_t k, const float* a, const float* b,
                    float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        float* crow = c + i * n;
        if (!accumulate) std::memset(crow, 0, n * sizeof(float));
        for (size_t l = 0; l < k; ++l) {
            const float ail = a[i * k + l];
            if (ail == 0.0f) continue;
            row_saxpy(ail, b + l * n, crow, n);
        }
    }
}

void matmul_tn_avx2(size_t m, size_t n, size_t k, const float* a, const float* b,
                    float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        float* crow = c + i * n;
        if (!accumulate) std::memset(crow, 0, n * sizeof(float));
        for (size_t l = 0; l < k; ++l) {
            const float ali = a[l * m + i];
            if (ali == 0.0f) continue;
            row_saxpy(ali, b + l * n, crow, n);
        }
    }
}

void matmul_nt_avx2(size_t m, size_t n, size_t k, const float* a, const float* b,
                    float* c, bool accumulate) {
    for (size_t i = 0; i < m; ++i) {
        const float* arow = a + i * k;
        for (size_t j = 0; j < n; ++j) {
            float acc = dot_avx2(arow, b + j * k, k);
            if (accumulate)
                c[i * n + j] += acc;
            else
                c[i * n + j] = acc;
        }
    }
}

void softmax_rows_avx2(float* x, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        float* row = x + r * cols;
        __m256 vmax = _mm256_set1_ps(row[0]);
        size_t j = 0;
        for (; j + 8 <= cols; j += 8) vmax = _mm256_max_ps(vmax, _mm256_loadu_ps(row + j));
        float mx = hmax256(vmax);
        for (; j < cols; ++j)
            if (row[j] > mx) mx = row[j];
        float total = 0.0f;
        for (j = 0; j < cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            total += row[j];
        }
        scale_avx2(row, cols, 1.0f / total);
    }
}

void relu_inplace_avx2(float* x, size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
    for (; i < n; ++i)
        if (x[i] < 0.0f) x[i] = 0.0f;
}

void relu_backward_avx2(const float* activ, float* grad, size_t n) {
    const __m256 zero = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(activ + i), zero, _CMP_GT_OQ);
        _mm256_storeu_ps(grad + i, _mm256_and_ps(_mm256_loadu_ps(grad + i), mask));
    }
    for (; i < n; ++i)
        if (activ[i] <= 0.0f) grad[i] = 0.0f;
}

void adam_step_avx2(float* w, const float* g, float* m, float* v, size_t n,
                    float lr, float beta1, float beta2, float eps,
                    float inv_bc1, float inv_bc2) {
    const __m256 vb1 = _mm256_set1_ps(beta1);
    const __m256 vb2 = _mm256_set1_ps(beta2);
    const __m256 vc1 = _mm256_set1_ps(1.0f - beta1);
    const __m256 vc2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 vlr = _mm256_set1_ps(lr);
    const __m256 veps = _mm256_set1_ps(eps);
    const __m256 vibc1 = _mm256_set1_ps(inv_bc1);
    const __m256 vibc2 = _mm256_set1_ps(inv_bc2);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vg = _mm256_loadu_ps(g + i);
        __m256 vm = _mm256_fmadd_ps(vb1, _mm256_loadu_ps(m + i), _mm256_mul_ps(vc1, vg));
        __m256 vv = _mm256_fmadd_ps(vb2, _mm256_loadu_ps(v + i),
                                    _mm256_mul_ps(vc2, _mm256_mul_ps(vg, vg)));
        _mm256_storeu_ps(m + i, vm);
        _mm256_storeu_ps(v + i, vv);
        __m256 mhat = _mm256_mul_ps(vm, vibc1);
        __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(_mm256_mul_ps(vv, vibc2)), veps);
        __m256 step = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
        _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), step));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        w[i] -= lr * (m[i] * inv_bc1) / (std::sqrt(v[i] * inv_bc2) + eps);
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        dot_avx2,          axpy_avx2,         scale_avx2,
        sum_avx2,          matmul_nn_avx2,    matmul_tn_avx2,
        matmul_nt_avx2,    softmax_rows_avx2, relu_inplace_avx2,
        relu_backward_avx2, adam_step_avx2,
    };
    return ops;
}

#else

const Ops& avx2_ops() {
    std::abort();  // dispatch never routes here off x86-64
}

#endif

}  // namespace qmine::kernels
