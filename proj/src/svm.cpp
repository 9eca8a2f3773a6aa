#include "igbs/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <set>
#include <string>

#include "igbs/errors.hpp"

namespace igbs {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        d2 += diff * diff;
    }
    return std::exp(-gamma * d2);
}

double BinarySvm::decision(std::span<const double> x) const {
    if (x.size() != dims) throw DataError("feature dimension does not match the SVM model");
    double f = bias;
    for (std::size_t k = 0; k < coef.size(); ++k) f += coef[k] * rbf_kernel(support_vectors.row(k), x, gamma);
    return f;
}

namespace {

constexpr double kTau = 1e-12;

// LRU cache of kernel matrix rows.
class KernelRows {
public:
    KernelRows(const FeatureMatrix& x, double gamma, std::size_t budget_bytes)
        : x_(x), gamma_(gamma), rows_(x.rows), where_(x.rows, lru_.end()) {
        const std::size_t row_bytes = std::max<std::size_t>(1, x.rows * sizeof(float));
        capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
    }

    const std::vector<float>& row(std::size_t i) {
        if (!rows_[i].empty()) {
            lru_.splice(lru_.begin(), lru_, where_[i]);
            return rows_[i];
        }
        if (lru_.size() >= capacity_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            where_[victim] = lru_.end();
            std::vector<float>().swap(rows_[victim]);
        }
        auto& r = rows_[i];
        r.resize(x_.rows);
        const auto xi = x_.row(i);
        for (std::size_t k = 0; k < x_.rows; ++k) r[k] = static_cast<float>(rbf_kernel(xi, x_.row(k), gamma_));
        lru_.push_front(i);
        where_[i] = lru_.begin();
        return r;
    }

private:
    const FeatureMatrix& x_;
    double gamma_;
    std::vector<std::vector<float>> rows_;
    std::list<std::size_t> lru_;
    std::vector<std::list<std::size_t>::iterator> where_;
    std::size_t capacity_ = 2;
};

}  // namespace

BinarySvm train_binary_svm(const FeatureMatrix& x, std::span<const int> y, const SvmParams& params) {
    const std::size_t n = x.rows;
    if (n < 2) throw DataError("SVM training needs at least two samples");
    if (y.size() != n) throw DataError("SVM labels do not match sample count");
    if (!(params.c > 0.0) || !(params.gamma > 0.0) || !(params.tol > 0.0)) {
        throw ConfigError("SVM needs C > 0, gamma > 0 and tol > 0");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw DataError("SVM labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw DataError("SVM training needs both classes");

    const double c = params.c;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
    KernelRows kernel(x, params.gamma, params.cache_mb * 1024 * 1024);

    auto upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    std::size_t iter = 0;
    for (;; ++iter) {
        // Working set: i maximizes -y G over I_up, j minimizes the second-order
        // objective decrease over I_low.
        double g_max = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1 ? !upper(t) : !lower(t)) {
                const double v = -y[t] * grad[t];
                if (v > g_max) {
                    g_max = v;
                    i = t;
                }
            }
        }
        if (i == n) break;

        const auto& ki = kernel.row(i);
        double g_max2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1 ? lower(t) : upper(t)) continue;
            const double v = y[t] * grad[t];  // = -(-y G)
            g_max2 = std::max(g_max2, v);
            const double grad_diff = g_max + v;
            if (grad_diff > 0.0) {
                double quad = 2.0 - 2.0 * static_cast<double>(ki[t]);  // K_ii + K_tt - 2 K_it, K_tt = 1 for RBF
                if (quad <= 0.0) quad = kTau;
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj < best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        if (g_max + g_max2 < params.tol || j == n) break;

        if (iter >= params.max_iter) {
            throw MethodError("SMO did not converge within " + std::to_string(params.max_iter) +
                              " iterations (KKT gap " + std::to_string(g_max + g_max2) + ")");
        }

        const auto& kj = kernel.row(j);
        const auto& ki_again = kernel.row(i);  // row i may have been evicted while fetching j
        const double kij = ki_again[j];
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];

        if (y[i] != y[j]) {
            double quad = 2.0 + 2.0 * (-kij);  // Q_ii + Q_jj + 2 Q_ij with Q_ij = -K_ij
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
            } else {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
            }
        } else {
            double quad = 2.0 - 2.0 * kij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
            } else {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y[t] * (y[i] * static_cast<double>(ki_again[t]) * dai + y[j] * static_cast<double>(kj[t]) * daj);
        }
    }

    // Bias: mean of y G over free vectors, else midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    BinarySvm m;
    m.gamma = params.gamma;
    m.c = c;
    m.dims = x.dims;
    m.bias = -rho;
    m.iterations = iter;
    std::vector<double> sv_values;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            const auto r = x.row(t);
            sv_values.insert(sv_values.end(), r.begin(), r.end());
            m.coef.push_back(alpha[t] * y[t]);
        }
    }
    m.support_vectors = FeatureMatrix(m.coef.size(), x.dims, std::move(sv_values));
    m.alpha = std::move(alpha);
    m.y.assign(y.begin(), y.end());
    return m;
}

SvmModel train_svm(const FeatureMatrix& x, std::span<const Label> labels, const SvmParams& params) {
    if (labels.size() != x.rows) throw DataError("SVM labels do not match sample count");
    if (x.dims == 0) throw DataError("SVM needs at least one feature");
    std::set<Label> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) throw DataError("SVM training needs at least two classes");

    SvmParams resolved = params;
    if (resolved.gamma <= 0.0) resolved.gamma = 1.0 / static_cast<double>(x.dims);

    SvmModel model;
    model.classes.assign(distinct.begin(), distinct.end());
    model.c = resolved.c;
    model.gamma = resolved.gamma;
    model.tol = resolved.tol;
    model.dims = x.dims;

    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            const Label pos = model.classes[a];
            const Label neg = model.classes[b];
            std::vector<double> values;
            std::vector<int> y;
            for (std::size_t t = 0; t < x.rows; ++t) {
                if (labels[t] != pos && labels[t] != neg) continue;
                const auto r = x.row(t);
                values.insert(values.end(), r.begin(), r.end());
                y.push_back(labels[t] == pos ? 1 : -1);
            }
            const FeatureMatrix sub(y.size(), x.dims, std::move(values));
            try {
                BinarySvm m = train_binary_svm(sub, y, resolved);
                m.positive = pos;
                m.negative = neg;
                model.machines.push_back(std::move(m));
            } catch (const MethodError& e) {
                throw MethodError("class pair (" + std::to_string(pos) + ", " + std::to_string(neg) + "): " + e.what());
            }
        }
    }
    return model;
}

std::vector<Label> predict(const SvmModel& model, const FeatureMatrix& x) {
    if (x.dims != model.dims) {
        throw DataError("feature dimension " + std::to_string(x.dims) + " does not match model dimension " +
                        std::to_string(model.dims));
    }
    std::vector<Label> out(x.rows);
    std::vector<std::size_t> votes(model.classes.size());
    auto index_of = [&](Label l) {
        return static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), l) -
                                        model.classes.begin());
    };
    for (std::size_t r = 0; r < x.rows; ++r) {
        std::fill(votes.begin(), votes.end(), 0);
        const auto row = x.row(r);
        for (const auto& m : model.machines) {
            ++votes[index_of(m.decision(row) >= 0.0 ? m.positive : m.negative)];
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < votes.size(); ++k) {
            if (votes[k] > votes[best]) best = k;
        }
        out[r] = model.classes[best];
    }
    return out;
}

}  // namespace igbs
