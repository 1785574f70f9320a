#include "ehcoop/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehcoop {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// Chebyshev series for the exponentially scaled K1 on (2, 8] and (8, inf),
// from SLATEC DBSK1E (Fullerton, FNLIB). Good to ~31 decimal digits; the
// nt* constants truncate them at double precision.
constexpr double kAk1cs[38] = {
    0.27443134069738829695257666227266,
    0.07571989953199367817089237814929,
    -0.0014410515564754061229853116175625,
    6.6501169551257479394251385477036e-5,
    -4.3699847095201407660580845089167e-6,
    3.5402774997630526799417139008534e-7,
    -3.3111637792932920208982688245704e-8,
    3.4459775819010534532311499770992e-9,
    -3.8989323474754271048981937492758e-10,
    4.7208197504658356400947449339005e-11,
    -6.047835662875356234537359156289e-12,
    8.1284948748658747888193837985663e-13,
    -1.1386945747147891428923915951042e-13,
    1.654035840846228232597294820509e-14,
    -2.4809025677068848221516010440533e-15,
    3.8292378907024096948429227299157e-16,
    -6.0647341040012418187768210377386e-17,
    9.8324256232648616038194004650666e-18,
    -1.6284168738284380035666620115626e-18,
    2.7501536496752623718284120337066e-19,
    -4.7289666463953250924281069568e-20,
    8.2681500028109932722392050346666e-21,
    -1.4681405136624956337193964885333e-21,
    2.6447639269208245978085894826666e-22,
    -4.82901575648563878979698688e-23,
    8.9293020743610130180656332799999e-24,
    -1.6708397168972517176997751466666e-24,
    3.1616456034040694931368618666666e-25,
    -6.0462055312274989106506410666666e-26,
    1.1678798942042732700718421333333e-26,
    -2.277374158265399623286784e-27,
    4.4811097300773675795305813333333e-28,
    -8.8932884769020194062336e-29,
    1.7794680018850275131392e-29,
    -3.5884555967329095821994666666666e-30,
    7.2906290492694257991679999999999e-31,
    -1.4918449845546227073024e-31,
    3.0736573872934276300799999999999e-32,
};
constexpr int kNtAk1 = 18;

constexpr double kAk12cs[33] = {
    0.06379308343739001036600488534102,
    0.02832887813049720935835030284708,
    -2.475370673905250345414545566732e-4,
    5.771972451607248820470976625763e-6,
    -2.068939219536548302745533196552e-7,
    9.739983441381804180309213097887e-9,
    -5.585336140380624984688895511129e-10,
    3.732996634046185240221212854731e-11,
    -2.825051961023225445135065754928e-12,
    2.372019002484144173643496955486e-13,
    -2.176677387991753979268301667938e-14,
    2.157914161616032453939562689706e-15,
    -2.290196930718269275991551338154e-16,
    2.582885729823274961919939565226e-17,
    -3.07675264126846318762109817344e-18,
    3.851487721280491597094896844799e-19,
    -5.0447948976415289771172825088e-20,
    6.888673850418544237018292223999e-21,
    -9.77504154195011830300213248e-22,
    1.437416218523836461001659733333e-22,
    -2.185059497344347373499733333333e-23,
    3.4262456218092206316453888e-24,
    -5.531064394246408232501248e-25,
    9.176601505685995403782826666666e-26,
    -1.562287203618024911448746666666e-26,
    2.725419375484333132349439999999e-27,
    -4.865674910074827992378026666666e-28,
    8.879388552723502587357866666666e-29,
    -1.654585918039257548936533333333e-29,
    3.145111321357848674303999999999e-30,
    -6.092998312193127612416e-31,
    1.202021939369815834623999999999e-31,
    -2.412930801459408841386666666666e-32,
};
constexpr int kNtAk12 = 14;

double csevl(double x, const double* cs, int n) {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    const double twox = 2.0 * x;
    for (int i = n - 1; i >= 0; --i) {
        b2 = b1;
        b1 = b0;
        b0 = twox * b1 - b2 + cs[i];
    }
    return 0.5 * (b0 - b2);
}

// Ascending-series pieces for x <= 2 with u = x^2/4:
//   si  = sum_k u^k / (k! (k+1)!)                 [I1(x) = (x/2) si]
//   spsi = sum_k (psi(k+1)+psi(k+2)) u^k / (k! (k+1)!)
// Then K1(x) = 1/x + ln(x/2) (x/2) si - (x/4) spsi.
struct SeriesSums {
    double si;
    double spsi;
};

SeriesSums ascending_sums(double x) {
    const double u = 0.25 * x * x;
    double term = 1.0;                    // u^k / (k! (k+1)!)
    double hk = 1.0 - 2.0 * kEulerGamma;  // psi(k+1)+psi(k+2) at k = 0
    double si = term;
    double spsi = hk * term;
    for (int k = 1; k <= 40; ++k) {
        term *= u / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k + 1.0 / (k + 1);
        si += term;
        spsi += hk * term;
        if (term * (std::fabs(hk) + 1.0) < 1e-18 * si) break;
    }
    return {si, spsi};
}

}  // namespace

double bessel_k1(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_k1 requires x > 0");
    }
    if (x <= 2.0) {
        const SeriesSums s = ascending_sums(x);
        return 1.0 / x + std::log(0.5 * x) * (0.5 * x) * s.si - 0.25 * x * s.spsi;
    }
    const double scaled = (x <= 8.0)
        ? (1.25 + csevl((16.0 / x - 5.0) / 3.0, kAk1cs, kNtAk1)) / std::sqrt(x)
        : (1.25 + csevl(16.0 / x - 1.0, kAk12cs, kNtAk12)) / std::sqrt(x);
    return std::exp(-x) * scaled;  // underflows to 0 for x beyond ~745
}

double one_minus_x_bessel_k1(double x) {
    if (!(x >= 0.0)) {
        throw std::domain_error("one_minus_x_bessel_k1 requires x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x <= 2.0) {
        // 1 - x K1(x) = (x^2/4) (spsi - 2 ln(x/2) si), no leading-1 subtraction.
        const SeriesSums s = ascending_sums(x);
        return 0.25 * x * x * (s.spsi - 2.0 * std::log(0.5 * x) * s.si);
    }
    // x K1(x) < 0.28 here, so the plain difference is well conditioned.
    const double k1 = bessel_k1(x);
    if (!(k1 > 0.0)) return 1.0;  // underflow (or x = inf): the product is 0
    return 1.0 - x * k1;
}

}  // namespace ehcoop
