#include "inkgrain/reflectance_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "inkgrain/error.hpp"

namespace inkgrain {

double ReflectanceModel::reflectance_of(Label l) const noexcept {
    switch (l) {
        case Label::PC: return r_pc;
        case Label::PM: return r_pm;
        case Label::O: return r_o;
        case Label::W: return r_w;
    }
    return 0.0;
}

CoverageRatios coverage_ratios(const LabelMap& labels) {
    const auto c = labels.counts();
    const double n = static_cast<double>(labels.size());
    return CoverageRatios{c[index_of(Label::PC)] / n, c[index_of(Label::PM)] / n,
                          c[index_of(Label::O)] / n, c[index_of(Label::W)] / n};
}

ReflectanceModel fit_reflectance_model(std::span<const PatchRecord> records) {
    if (records.size() < 4)
        throw ParameterError("reflectance fit needs at least 4 patches, got " +
                             std::to_string(records.size()));
    const auto n = static_cast<Eigen::Index>(records.size());
    Eigen::MatrixXd x(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const PatchRecord& r = records[static_cast<std::size_t>(i)];
        if (!(r.total_reflectance >= 0.0 && r.total_reflectance <= 1.0))
            throw DomainError("patch " + r.id + " has total reflectance outside [0,1]");
        x(i, 0) = r.coverage.a_pc;
        x(i, 1) = r.coverage.a_pm;
        x(i, 2) = r.coverage.a_o;
        x(i, 3) = r.coverage.a_w;
        y(i) = r.total_reflectance;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(3);
    if (!(smax > 0.0) || !(smin > 0.0) || smax / smin > kMaxConditionNumber) {
        const Eigen::VectorXd dir = svd.matrixV().col(3);
        std::ostringstream msg;
        msg << "coverage design is rank deficient (singular values " << sv.transpose()
            << "); unresolved direction (pc, pm, o, w) = (" << dir(0) << ", " << dir(1) << ", "
            << dir(2) << ", " << dir(3) << ")";
        throw FitDegenerateError(msg.str(), {dir(0), dir(1), dir(2), dir(3)});
    }

    const Eigen::VectorXd beta = svd.solve(y);
    const Eigen::VectorXd residual = y - x * beta;

    ReflectanceModel m;
    m.r_pc = beta(0);
    m.r_pm = beta(1);
    m.r_o = beta(2);
    m.r_w = beta(3);
    m.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
    m.n_patches = static_cast<int>(n);

    for (Label l : kAllLabels) {
        const double r = m.reflectance_of(l);
        if (r < 0.0 || r > 1.0)
            m.warnings.push_back("r_" + std::string(label_key(l)) + " = " + std::to_string(r) +
                                 " lies outside [0,1]");
    }
    if (!(m.r_w >= m.r_pc && m.r_w >= m.r_pm && m.r_w >= m.r_o))
        m.warnings.push_back("r_w is not the largest component reflectance");
    return m;
}

double predict_total_reflectance(const CoverageRatios& c, const ReflectanceModel& m) {
    return c.a_pc * m.r_pc + c.a_pm * m.r_pm + c.a_o * m.r_o + c.a_w * m.r_w;
}

Plane reconstruct_reflectance(const LabelMap& labels, const ReflectanceModel& m, double dpi) {
    std::vector<double> out(labels.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m.reflectance_of(labels.get(i));
    return Plane(labels.width(), labels.height(), dpi, std::move(out));
}

}  // namespace inkgrain
