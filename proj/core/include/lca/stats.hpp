/** \file  stats.hpp
 *  \brief Spearman rank correlation with average ranks for ties, and correlation matrices.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lca {

class PairedSample {
public:
    /// Throws InvalidValueError for unequal lengths or non-finite values.
    PairedSample(std::vector<double> x, std::vector<double> y);

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return x_.size(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

/// 1-based ranks; tied values share the mean of the positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson product-moment coefficient of the average-rank vectors, clamped to [-1, 1].
/// Throws SampleSizeError for n < 2 and UndefinedCorrelationError when a coordinate is constant.
double spearman(const PairedSample &sample);

struct NamedColumn {
    std::string label;
    /// Absent entries are dropped pairwise.
    std::vector<std::optional<double>> values;
};

struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<double>>> values;
    /// Why a cell is absent; empty for defined cells.
    std::vector<std::vector<std::string>> reasons;

    bool complete() const;
};

/// Pairwise Spearman coefficients. Undefined cells (constant columns, too few complete pairs) are
/// left absent with a reason. Throws SampleSizeError for fewer than 2 columns, unequal lengths or
/// length < 2.
CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns);

} // namespace lca
