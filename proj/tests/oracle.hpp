#pragma once

// High-precision reference values, computed independently with 30-digit
// arithmetic and frozen here. Tests compare library output against these.

namespace oracle {

// integral of sin(x) over [0,1] = 1 - cos(1)
inline constexpr double int_sin = 0.459697694131860282599063392557;
// integral of x*sin(x) over [0,1] = sin(1) - cos(1)
inline constexpr double int_x_sin = 0.301168678939756789251565714187;
// integral of x^2*sin(x) over [0,1] = cos(1) + 2*sin(1) - 2
inline constexpr double int_x2_sin = 0.223244275483932730705941250703;
// integral of x*cos(x) over [0,1] = cos(1) + sin(1) - 1
inline constexpr double int_x_cos = 0.381773290676036224053438929073;
// integral of x^2*cos(x) over [0,1] = 2*cos(1) - sin(1)
inline constexpr double int_x2_cos = 0.239133626928382928149370893256;
// L2 norm of sin(x) on [0,1]
inline constexpr double norm_sin = 0.522183534108056279824517478861;
// L2 norm of x^2 on [0,1] = sqrt(1/5)
inline constexpr double norm_x2 = 0.447213595499957939281834733746;
// L2 norm of exp(-0.1*x^2) - 1 on [0,1]
inline constexpr double norm_exp_m01x2_minus_1 = 0.0431671579652288646706920430322;
// exp(-1/2)
inline constexpr double exp_m_half = 0.606530659712633423603799534991;
// exp(-0.02)
inline constexpr double exp_m_002 = 0.980198673306755301812724428296;
// 2*(2*pi + 0.1)*1e-4
inline constexpr double sigma_tilde_beta01 = 0.00127663706143591729538505735331;
// 2*(2*pi + 0.01)*1e-4
inline constexpr double sigma_tilde_beta001 = 0.00125863706143591729538505735331;

}  // namespace oracle
