#ifndef ORDERSENS_FIELD_IO_HPP
#define ORDERSENS_FIELD_IO_HPP

#include <string>
#include <string_view>

#include "ordersens/valuation.hpp"

namespace ordersens {

// Edge fields:    ideal,add,value
// Diamond fields: ideal,u,v,value
// Potentials:     ideal,value
// Gauge systems:  ideal,alpha   (non-base nodes only)
// Ideals are τ-sorted ids joined by '+', or '-' for the empty set.
// Readers require the rows to cover the slice's domain exactly.

std::string write_edge_field(const EdgeField& g);
EdgeField read_edge_field(const SlicePtr& slice, std::string_view text);

std::string write_diamond_field(const DiamondField& kappa);
DiamondField read_diamond_field(const SlicePtr& slice, std::string_view text);

std::string write_potential(const Potential& phi);
std::string write_theta(const ThetaSystem& theta);
Potential read_potential(const SlicePtr& slice, std::string_view text);

std::string write_gauge(const GaugeSystem& alpha);
GaugeSystem read_gauge(const SlicePtr& slice, std::string_view text);

}  // namespace ordersens

#endif
