#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace sentinel {

struct FilterParams {
    std::size_t median_window = 7;
    std::size_t mean_window = 31;

    /// Throws EvenWindow unless both windows are odd (and therefore >= 1).
    void validate() const;
};

// Centered windows. Near either end the window shrinks symmetrically, so
// output i uses samples [i - r, i + r] with r = min(window / 2, i, n - 1 - i).

std::vector<double> moving_median(std::span<const double> series, std::size_t window);
std::vector<double> moving_mean(std::span<const double> series, std::size_t window);
/// filtered - trend, element by element.
std::vector<double> detrend(std::span<const double> filtered, std::span<const double> trend);

/// Streaming counterpart of moving_median. Output i becomes available once
/// sample min(2i, i + window/2) has been pushed; finish() flushes the tail.
/// Keeps the last `window` samples in an order-maintained buffer, so each
/// push costs O(window).
class StreamingMedian {
public:
    explicit StreamingMedian(std::size_t window);

    /// Appends any outputs that became available to `out`.
    void push(double sample, std::vector<double>& out);
    void finish(std::vector<double>& out);

private:
    void insert_sorted(double v);
    void erase_sorted(double v);
    [[nodiscard]] double median_of_last(std::size_t count);

    std::size_t half_;
    std::size_t pushed_ = 0;
    std::size_t emitted_ = 0;
    std::deque<double> recent_;  // arrival order
    std::vector<double> sorted_;
};

/// Streaming counterpart of moving_mean; bit-identical to the batch result.
class StreamingMean {
public:
    explicit StreamingMean(std::size_t window);

    void push(double sample, std::vector<double>& out);
    void finish(std::vector<double>& out);

private:
    [[nodiscard]] double centered_mean(std::size_t center, std::size_t radius) const;

    std::size_t half_;
    std::size_t pushed_ = 0;
    std::size_t emitted_ = 0;
    std::deque<double> recent_;
    std::size_t first_index_ = 0;  // sample index of recent_.front()
};

/// Median filter -> moving-mean trend -> detrend, the front end of the
/// frequency detector. Returns the de-trended deviation series.
std::vector<double> deviation_series(std::span<const double> series, const FilterParams& params);

}  // namespace sentinel
