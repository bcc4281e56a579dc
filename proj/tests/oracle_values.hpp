#pragma once

// High-precision reference values produced by tests/oracles/mp_oracles.py (mpmath, 40 digits).

#include <array>

namespace weil::oracle {

inline constexpr double kBumpIntegral = 0.4439938161680794378230489;
inline constexpr double kXiHalf = 0.4971207781883141099127737;

struct XiPoint {
  double s_re, s_im;
  double xi_re, xi_im;
  double xi_prime_re, xi_prime_im;
};

inline constexpr std::array<XiPoint, 6> kXiTable = {{
    {2.0, 0.0, 0.5235987755982988730771072, 0.0, 0.03616299426429697831275048, 0.0},
    {0.5, 10.0, 0.03796785031093568422408052, 0.0, 0.0, 0.02245050598901059147135695},
    {0.3, 25.5, -4.779187639440713870157435e-7, -1.246043458371788958112184e-7, 2.223897484003275050138491e-7,
     6.12340944235451087694575e-7},
    {1.7, -40.25, -8.403534175871570620624287e-12, -3.386181216090491514580861e-11, -4.215356771165463508522732e-11,
     -2.601045777662518523686365e-11},
    {0.5, 100.0, -7.410044794067285910190058e-31, 0.0, 0.0, -5.078024583473793763429955e-31},
    {3.0, 7.0, 0.1184470514746799757496194, 0.1409339742482580103396344, -0.02975296912707210649908237,
     0.06088372194629832168525541},
}};

inline constexpr std::array<double, 30> kZeroOrdinates = {
    14.13472514173469379046, 21.02203963877155499263, 25.01085758014568876321, 30.42487612585951321031,
    32.93506158773918969066, 37.58617815882567125722, 40.9187190121474951874,  43.3270732809149995195,
    48.00515088116715972794, 49.77383247767230218192, 52.97032147771446064415, 56.44624769706339480437,
    59.34704400260235307965, 60.83177852460980984426, 65.11254404808160666088, 67.07981052949417371448,
    69.54640171117397925293, 72.06715767448190758252, 75.70469069908393316833, 77.14484006887480537268,
    79.33737502024936792276, 82.91038085408603018316, 84.73549298051705010574, 87.42527461312522940653,
    88.80911120763446542368, 92.49189927055848429626, 94.6513440405198869666,  95.87063422824530975874,
    98.83119421819369223332, 101.3178510057313912288,
};

struct BumpHat {
  double z, value;
};

// Transform of the unit bump on [-1, 1] at real z (purely real by evenness).
inline constexpr std::array<BumpHat, 4> kBumpHat = {{
    {1.0, 0.4098591323903443535311},
    {3.0, 0.1979030328451425707121},
    {14.134725141734693, -0.007452565618639719261136},
    {50.0, -0.0000666150588624617945431},
}};

}  // namespace weil::oracle
