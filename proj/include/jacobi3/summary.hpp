#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace jacobi3 {

/// Aggregate of per-point residual magnitudes. `max_scaled` is the maximum of
/// |r| / scale(p), where scale is the local magnitude factor of the check.
struct Summary {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double max_scaled = 0.0;
    std::size_t points = 0;
};

class SummaryBuilder {
public:
    void add(double residual, double scale = 1.0)
    {
        const double a = std::fabs(residual);
        // NaN must never read as a pass.
        if (std::isnan(a)) {
            nan_ = true;
        }
        s_.max_abs = std::max(s_.max_abs, a);
        s_.max_scaled = std::max(s_.max_scaled, a / scale);
        sum_ += a;
        ++s_.points;
    }
    [[nodiscard]] Summary result() const
    {
        Summary out = s_;
        out.mean_abs = s_.points ? sum_ / static_cast<double>(s_.points) : 0.0;
        if (nan_) out.max_abs = out.max_scaled = out.mean_abs = std::nan("");
        return out;
    }

private:
    Summary s_;
    double sum_ = 0.0;
    bool nan_ = false;
};

namespace detail {

/// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. The
/// first exception (lowest chunk) is rethrown after all workers finish.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t min_chunk = 64)
{
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / min_chunk));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    const std::size_t end = std::min(n, (w + 1) * chunk);
                    for (std::size_t i = w * chunk; i < end; ++i) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace detail

} // namespace jacobi3
