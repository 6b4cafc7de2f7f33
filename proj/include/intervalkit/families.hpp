#pragma once

#include <map>
#include <string>
#include <vector>

#include "intervalkit/map.hpp"

namespace intervalkit {

/// Builtin map gallery. Families and their parameters (defaults in parens):
///   doubling            2x mod 1; orders 1/1 at c = 1/2
///   tent                slope (2); peak at 1/2, orders 1/1
///   logistic            mu (4); quadratic critical point, orders 2/2
///   asymmetric_unimodal c (0.5), l_left (2), l_right (2.5), peak (1),
///                       f0 (0), f1 (0); one-sided orders differ
///   lorenz_affine       c (0.5), f0 (0.3), fc_left (1), fc_right (0),
///                       f1 (0.7); discontinuous, affine, orders 1/1
///   lorenz_power        c (0.5), l_left (1.5), l_right (2.5), f0 (0.25),
///                       f1 (0.75), fc_left (1), fc_right (0); contracting
///                       Lorenz shape with declared one-sided orders
///   gap_affine          c (0.5), slope (0.4), offset_left (0.3),
///                       offset_right (0.35); injective, image omits a gap
MapSpec make_builtin(const std::string& family,
                     const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_families();

}  // namespace intervalkit
