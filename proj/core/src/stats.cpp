#include "lca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lca/errors.hpp"

namespace lca {

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

bool constant(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [&](double value) { return value == values.front(); });
}

} // unnamed namespace

PairedSample::PairedSample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
        throw InvalidValueError("paired sample coordinates differ in length");
    const auto finite = [](double value) { return std::isfinite(value); };
    if (!std::all_of(x_.begin(), x_.end(), finite) || !std::all_of(y_.begin(), y_.end(), finite))
        throw InvalidValueError("paired sample contains a non-finite value");
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start + 1;
        while (stop < order.size() && values[order[stop]] == values[order[start]])
            ++stop;
        // positions start+1 .. stop share their mean
        const double rank = (static_cast<double>(start + 1) + static_cast<double>(stop)) / 2.0;
        for (std::size_t k = start; k < stop; ++k)
            ranks[order[k]] = rank;
        start = stop;
    }
    return ranks;
}

double spearman(const PairedSample &sample) {
    if (sample.size() < 2)
        throw SampleSizeError("Spearman correlation needs at least 2 pairs, got " + std::to_string(sample.size()));
    if (constant(sample.x()) || constant(sample.y()))
        throw UndefinedCorrelationError("Spearman correlation is undefined for a constant coordinate");
    const auto rank_x = average_ranks(sample.x());
    const auto rank_y = average_ranks(sample.y());
    return pearson(rank_x, rank_y);
}

bool CorrelationMatrix::complete() const {
    for (const auto &row : values)
        for (const auto &cell : row)
            if (!cell)
                return false;
    return true;
}

CorrelationMatrix correlation_matrix(std::span<const NamedColumn> columns) {
    if (columns.size() < 2)
        throw SampleSizeError("a correlation matrix needs at least 2 columns");
    const auto length = columns.front().values.size();
    for (const auto &column : columns)
        if (column.values.size() != length)
            throw SampleSizeError("column " + column.label + " differs in length");
    if (length < 2)
        throw SampleSizeError("columns need at least 2 entries");

    const auto n = columns.size();
    CorrelationMatrix matrix;
    matrix.values.assign(n, std::vector<std::optional<double>>(n));
    matrix.reasons.assign(n, std::vector<std::string>(n));
    for (const auto &column : columns)
        matrix.labels.push_back(column.label);

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < length; ++i)
                if (columns[a].values[i] && columns[b].values[i]) {
                    x.push_back(*columns[a].values[i]);
                    y.push_back(*columns[b].values[i]);
                }
            try {
                double value = spearman(PairedSample(std::move(x), std::move(y)));
                if (a == b)
                    value = 1.0;
                matrix.values[a][b] = matrix.values[b][a] = value;
            } catch (const Error &error) {
                matrix.reasons[a][b] = matrix.reasons[b][a] = error.what();
            }
        }
    return matrix;
}

} // namespace lca
