#include "sentinel/signal_filters.hpp"

#include <algorithm>
#include <string>

#include "sentinel/error.hpp"

namespace sentinel {

namespace {

void require_odd(std::size_t window, const char* what) {
    if (window % 2 == 0)
        throw Error(ErrorCode::EvenWindow, std::string(what) + " window must be odd, got " + std::to_string(window));
}

std::size_t radius_at(std::size_t i, std::size_t n, std::size_t half) {
    return std::min({half, i, n - 1 - i});
}

// Center sample plus symmetric pairs, accumulated outward. Pairing keeps the
// result bit-identical when the series is reversed.
template <typename At>
double symmetric_mean(At at, std::size_t center, std::size_t radius) {
    // offsets from the center sample keep constant runs exact
    const double c = at(center);
    double sum = 0.0;
    for (std::size_t k = 1; k <= radius; ++k) sum += (at(center - k) - c) + (at(center + k) - c);
    return c + sum / static_cast<double>(2 * radius + 1);
}

}  // namespace

void FilterParams::validate() const {
    require_odd(median_window, "median");
    require_odd(mean_window, "mean");
}

std::vector<double> moving_median(std::span<const double> series, std::size_t window) {
    require_odd(window, "median");
    const std::size_t n = series.size();
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    std::vector<double> scratch;
    scratch.reserve(window);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = radius_at(i, n, half);
        scratch.assign(series.begin() + static_cast<std::ptrdiff_t>(i - r),
                       series.begin() + static_cast<std::ptrdiff_t>(i + r + 1));
        auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(r);
        std::nth_element(scratch.begin(), mid, scratch.end());
        out[i] = *mid;
    }
    return out;
}

std::vector<double> moving_mean(std::span<const double> series, std::size_t window) {
    require_odd(window, "mean");
    const std::size_t n = series.size();
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = symmetric_mean([&](std::size_t j) { return series[j]; }, i, radius_at(i, n, half));
    return out;
}

std::vector<double> detrend(std::span<const double> filtered, std::span<const double> trend) {
    if (filtered.size() != trend.size())
        throw Error(ErrorCode::LengthMismatch, "filtered has " + std::to_string(filtered.size()) +
                                                   " samples, trend has " + std::to_string(trend.size()));
    std::vector<double> out(filtered.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = filtered[i] - trend[i];
    return out;
}

std::vector<double> deviation_series(std::span<const double> series, const FilterParams& params) {
    params.validate();
    const auto filtered = moving_median(series, params.median_window);
    const auto trend = moving_mean(filtered, params.mean_window);
    return detrend(filtered, trend);
}

// --- StreamingMedian --------------------------------------------------------

StreamingMedian::StreamingMedian(std::size_t window) : half_(window / 2) {
    require_odd(window, "median");
    sorted_.reserve(window);
}

void StreamingMedian::insert_sorted(double v) { sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), v), v); }

void StreamingMedian::erase_sorted(double v) {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), v);
    sorted_.erase(it);
}

double StreamingMedian::median_of_last(std::size_t count) {
    while (recent_.size() > count) {
        erase_sorted(recent_.front());
        recent_.pop_front();
    }
    return sorted_[sorted_.size() / 2];
}

void StreamingMedian::push(double sample, std::vector<double>& out) {
    const std::size_t window = 2 * half_ + 1;
    recent_.push_back(sample);
    insert_sorted(sample);
    ++pushed_;
    if (recent_.size() > window) {
        erase_sorted(recent_.front());
        recent_.pop_front();
    }
    // output i needs samples up to i + min(half, i)
    if (pushed_ <= window) {
        if (pushed_ % 2 == 1) {
            out.push_back(sorted_[sorted_.size() / 2]);
            ++emitted_;
        }
    } else {
        out.push_back(sorted_[half_]);
        ++emitted_;
    }
}

void StreamingMedian::finish(std::vector<double>& out) {
    for (; emitted_ < pushed_; ++emitted_) {
        const std::size_t r = pushed_ - 1 - emitted_;
        out.push_back(median_of_last(2 * r + 1));
    }
}

// --- StreamingMean ----------------------------------------------------------

StreamingMean::StreamingMean(std::size_t window) : half_(window / 2) { require_odd(window, "mean"); }

double StreamingMean::centered_mean(std::size_t center, std::size_t radius) const {
    return symmetric_mean([&](std::size_t j) { return recent_[j - first_index_]; }, center, radius);
}

void StreamingMean::push(double sample, std::vector<double>& out) {
    const std::size_t window = 2 * half_ + 1;
    recent_.push_back(sample);
    ++pushed_;
    if (recent_.size() > window) {
        recent_.pop_front();
        ++first_index_;
    }
    if (pushed_ <= window) {
        if (pushed_ % 2 == 1) {
            const std::size_t center = (pushed_ - 1) / 2;
            out.push_back(centered_mean(center, center));
            ++emitted_;
        }
    } else {
        out.push_back(centered_mean(pushed_ - 1 - half_, half_));
        ++emitted_;
    }
}

void StreamingMean::finish(std::vector<double>& out) {
    for (; emitted_ < pushed_; ++emitted_) out.push_back(centered_mean(emitted_, pushed_ - 1 - emitted_));
}

}  // namespace sentinel
