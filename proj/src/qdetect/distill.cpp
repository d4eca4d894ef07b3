#include "qmine/qdetect/distill.hpp"

#include <algorithm>
#include <cmath>

#include "qmine/common/errors.hpp"
#include "qmine/teacher/soft_label.hpp"

namespace qmine::qdetect {

namespace {

void check_inputs(const std::vector<double>& logits, int target,
                  const std::vector<double>& teacher, const DistillConfig& cfg) {
    cfg.validate();
    if (logits.size() < 2) throw input_error("need at least 2 classes");
    if (teacher.size() != logits.size())
        throw input_error("teacher length does not match logits");
    if (target < 0 || static_cast<size_t>(target) >= logits.size())
        throw input_error("target out of range");
    for (double z : logits)
        if (!std::isfinite(z)) throw input_error("non-finite logit");
    double sum = 0.0;
    for (double p : teacher) {
        if (!std::isfinite(p) || p < 0.0) throw input_error("bad teacher probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-6) throw input_error("teacher is not normalized");
}

std::vector<double> normalize(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) sum += v;
    std::vector<double> out(p.size());
    for (size_t k = 0; k < p.size(); ++k) out[k] = p[k] / sum;
    return out;
}

}  // namespace

void DistillConfig::validate() const {
    if (tau <= 0.0) throw config_error("tau must be positive");
    if (alpha < 0.0) throw config_error("alpha must be non-negative");
    if (epsilon <= 0.0 || epsilon >= 0.5) throw config_error("epsilon must be in (0, 0.5)");
}

DistillParts distillation_parts(const std::vector<double>& logits, int target,
                                const std::vector<double>& teacher, const DistillConfig& cfg) {
    check_inputs(logits, target, teacher, cfg);
    const size_t i = static_cast<size_t>(target);
    const double eps = cfg.epsilon;

    DistillParts parts;
    parts.lce = nn::cross_entropy(logits, target, eps);

    std::vector<double> t_norm = normalize(teacher);
    std::vector<double> student = nn::softmax_stable(logits);
    double p = std::clamp(student[i], eps, 1.0 - eps);
    double q = std::clamp(t_norm[i], eps, 1.0 - eps);
    parts.w = 1.0 - std::exp(-std::log(p) / std::log(q));

    if (cfg.alpha == 0.0) {
        parts.loss = parts.lce;
        return parts;
    }

    std::vector<double> scaled(logits.size());
    for (size_t k = 0; k < logits.size(); ++k) scaled[k] = logits[k] / cfg.tau;
    std::vector<double> student_tau = nn::softmax_stable(scaled);
    std::vector<double> teacher_tau = teacher::smooth_teacher(t_norm, cfg.tau);
    double entropy = 0.0;
    for (size_t k = 0; k < logits.size(); ++k) {
        double st = std::clamp(student_tau[k], eps, 1.0 - eps);
        entropy -= teacher_tau[k] * std::log(st);
    }
    parts.lkl = parts.w * cfg.tau * cfg.tau * entropy;
    parts.loss = parts.lce + cfg.alpha * parts.lkl;
    return parts;
}

double distillation_loss(const std::vector<double>& logits, int target,
                         const std::vector<double>& teacher, const DistillConfig& cfg) {
    return distillation_parts(logits, target, teacher, cfg).loss;
}

std::vector<double> distillation_grad(const std::vector<double>& logits, int target,
                                      const std::vector<double>& teacher,
                                      const DistillConfig& cfg) {
    check_inputs(logits, target, teacher, cfg);
    const size_t i = static_cast<size_t>(target);
    const size_t K = logits.size();
    const double eps = cfg.epsilon;

    std::vector<double> student = nn::softmax_stable(logits);
    std::vector<double> grad(K);
    for (size_t k = 0; k < K; ++k) grad[k] = student[k] - (k == i ? 1.0 : 0.0);
    if (cfg.alpha == 0.0) return grad;

    std::vector<double> t_norm = normalize(teacher);
    std::vector<double> scaled(K);
    for (size_t k = 0; k < K; ++k) scaled[k] = logits[k] / cfg.tau;
    std::vector<double> student_tau = nn::softmax_stable(scaled);
    std::vector<double> teacher_tau = teacher::smooth_teacher(t_norm, cfg.tau);

    double p = std::clamp(student[i], eps, 1.0 - eps);
    double q = std::clamp(t_norm[i], eps, 1.0 - eps);
    double ratio = std::log(p) / std::log(q);
    double w = 1.0 - std::exp(-ratio);
    double entropy = 0.0;
    for (size_t k = 0; k < K; ++k) {
        double st = std::clamp(student_tau[k], eps, 1.0 - eps);
        entropy -= teacher_tau[k] * std::log(st);
    }

    // d w / d z_k = exp(-ratio) * (delta_ki - s_k) / log q
    // d H / d z_k = (st_k - tt_k) / tau
    const double tau2 = cfg.tau * cfg.tau;
    const double wexp = std::exp(-ratio);
    for (size_t k = 0; k < K; ++k) {
        double delta = k == i ? 1.0 : 0.0;
        double dw = wexp * (delta - student[k]) / std::log(q);
        double dkl = tau2 * entropy * dw + w * cfg.tau * (student_tau[k] - teacher_tau[k]);
        grad[k] += cfg.alpha * dkl;
    }
    return grad;
}

nn::Objective make_distill_objective(const DistillConfig& cfg) {
    cfg.validate();
    return [cfg](const std::vector<double>& logits, const nn::TrainExample& example,
                 std::vector<double>& dlogits) {
        if (cfg.alpha == 0.0 && !example.teacher) {
            nn::LossParts parts;
            parts.lce = nn::cross_entropy(logits, example.target, cfg.epsilon);
            parts.loss = parts.lce;
            dlogits = nn::cross_entropy_grad(logits, example.target);
            return parts;
        }
        if (!example.teacher) throw dataset_error("distillation requires teacher labels");
        DistillParts dp = distillation_parts(logits, example.target, *example.teacher, cfg);
        dlogits = distillation_grad(logits, example.target, *example.teacher, cfg);
        nn::LossParts parts;
        parts.loss = dp.loss;
        parts.lce = dp.lce;
        parts.lkl = dp.lkl;
        parts.w = dp.w;
        return parts;
    };
}

}  // namespace qmine::qdetect
