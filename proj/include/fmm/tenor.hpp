#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fmm {

// Tenor structure T_0 < T_1 < ... < T_N with year fractions tau_k = T_k - T_{k-1}.
// Rate indices k are 1-based throughout, matching the usual forward-rate notation.
class TenorStructure {
public:
    explicit TenorStructure(std::vector<double> dates) : dates_(std::move(dates)) {
        if (dates_.size() < 2)
            throw std::invalid_argument("tenor: need at least T_0 and T_1");
        for (std::size_t i = 1; i < dates_.size(); ++i)
            if (!(dates_[i] > dates_[i - 1]))
                throw std::invalid_argument("tenor: dates must be strictly increasing");
        taus_.resize(dates_.size() - 1);
        for (std::size_t i = 1; i < dates_.size(); ++i)
            taus_[i - 1] = dates_[i] - dates_[i - 1];
    }

    std::size_t num_rates() const { return taus_.size(); }

    // T_i for i in [0, N]
    double date(std::size_t i) const {
        if (i >= dates_.size()) throw std::out_of_range("tenor: date index");
        return dates_[i];
    }

    // tau_k = T_k - T_{k-1} for k in [1, N]
    double tau(std::size_t k) const {
        if (k < 1 || k > taus_.size()) throw std::out_of_range("tenor: tau index");
        return taus_[k - 1];
    }

    double horizon() const { return dates_.back(); }

    const std::vector<double>& dates() const { return dates_; }

    // eta(t) = min{ j : T_j >= t }, defined for t in [T_0, T_N].
    std::size_t eta(double t) const {
        if (t < dates_.front() || t > dates_.back())
            throw std::domain_error("tenor: eta(t) outside [T_0, T_N]");
        for (std::size_t j = 0; j < dates_.size(); ++j)
            if (dates_[j] >= t) return j;
        return dates_.size() - 1;  // unreachable; t <= T_N checked above
    }

private:
    std::vector<double> dates_;
    std::vector<double> taus_;
};

}  // namespace fmm
