#include "mechlab/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mechlab {

BidVector::BidVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("BidVector: need at least one agent");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("BidVector: non-finite bid at index " + std::to_string(i));
}

bool BidVector::all_nonnegative() const {
    for (double v : values_)
        if (v < 0.0) return false;
    return true;
}

BidVector zero_mask_bids(const BidVector& bids, const SubsetMask& mask) {
    if (mask.agent_count() != bids.size())
        throw std::invalid_argument("zero_mask_bids: mask size mismatch");
    std::vector<double> out(bids.size());
    for (std::size_t i = 0; i < bids.size(); ++i)
        out[i] = mask.contains(i) ? bids[i] : 0.0;
    return BidVector(std::move(out));
}

ValuationMatrix::ValuationMatrix(std::size_t agents, std::size_t outcomes, std::vector<double> flat)
    : agents_(agents), outcomes_(outcomes), flat_(std::move(flat)) {
    if (agents_ == 0 || outcomes_ == 0)
        throw std::invalid_argument("ValuationMatrix: empty dimension");
    if (flat_.size() != agents_ * outcomes_)
        throw std::invalid_argument("ValuationMatrix: flat size mismatch");
    for (double v : flat_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("ValuationMatrix: entries must be finite and >= 0");
}

ValuationMatrix::ValuationMatrix(const std::vector<std::vector<double>>& rows)
    : ValuationMatrix(rows.size(), rows.empty() ? 0 : rows[0].size(), [&] {
          std::vector<double> flat;
          for (const auto& r : rows) {
              if (r.size() != rows[0].size())
                  throw std::invalid_argument("ValuationMatrix: ragged rows");
              flat.insert(flat.end(), r.begin(), r.end());
          }
          return flat;
      }()) {}

ValuationMatrix ValuationMatrix::with_scaled_row(std::size_t agent, double factor) const {
    if (agent >= agents_)
        throw std::invalid_argument("ValuationMatrix: agent out of range");
    if (!(factor >= 0.0))
        throw std::invalid_argument("ValuationMatrix: scale factor must be >= 0");
    ValuationMatrix out = *this;
    for (std::size_t o = 0; o < outcomes_; ++o)
        out.flat_[agent * outcomes_ + o] *= factor;
    return out;
}

ValuationMatrix ValuationMatrix::masked(const SubsetMask& mask) const {
    if (mask.agent_count() != agents_)
        throw std::invalid_argument("ValuationMatrix: mask size mismatch");
    ValuationMatrix out = *this;
    for (std::size_t i = 0; i < agents_; ++i) {
        if (mask.contains(i)) continue;
        for (std::size_t o = 0; o < outcomes_; ++o)
            out.flat_[i * outcomes_ + o] = 0.0;
    }
    return out;
}

} // namespace mechlab
