#pragma once

namespace uclust {

/// Standard normal CDF.
double normal_cdf(double z);

/// Upper tail 1 - Phi(z), accurate far into the tail.
double normal_sf(double z);

/// log(1 - Phi(z)), finite for every finite z.
double log_normal_sf(double z);

/// log Phi(z).
double log_normal_cdf(double z);

/// Inverse of the standard normal CDF, p in (0,1).
double normal_quantile(double p);

}  // namespace uclust
