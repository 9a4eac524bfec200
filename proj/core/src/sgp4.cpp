// Near-Earth SGP4 after Hoots & Roehrich (Spacetrack Report #3) with the
// corrections collected by Vallado et al. (2006). Variable names follow the
// reference implementation so the two can be compared line by line.
#include "ssu/sgp4.hpp"

#include <cmath>
#include <string>

namespace ssu {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double twopi = 2.0 * pi;
constexpr double deg2rad = pi / 180.0;
constexpr double x2o3 = 2.0 / 3.0;

struct GravityConstants {
    double radius, xke, j2, j3, j4;
};

GravityConstants constants_for(GravityModel g) {
    switch (g) {
        case GravityModel::Wgs72Old:
            return {6378.135, 0.0743669161, 0.001082616, -0.00000253881, -0.00000165597};
        case GravityModel::Wgs72: {
            const double r = 6378.135;
            return {r, 60.0 / std::sqrt(r * r * r / 398600.8), 0.001082616, -0.00000253881, -0.00000165597};
        }
        case GravityModel::Wgs84: {
            const double r = 6378.137;
            return {r, 60.0 / std::sqrt(r * r * r / 398600.5), 0.00108262998905, -0.00000253215306,
                    -0.00000161098761};
        }
    }
    throw ConfigError("unknown gravity model");
}

}  // namespace

PropagationDiverged::PropagationDiverged(int catalog_id, int code, double tsince_min)
    : PropagationError("propagation of catalog " + std::to_string(catalog_id) + " diverged (code " +
                       std::to_string(code) + ") at " + std::to_string(tsince_min) + " min"),
      catalog_id_(catalog_id), code_(code) {}

EpochTooFar::EpochTooFar(int catalog_id, double offset_days)
    : PropagationError("catalog " + std::to_string(catalog_id) + " requested " + std::to_string(offset_days) +
                       " days from its epoch (limit 7)") {}

Sgp4::Sgp4(const OrbitalElements& el, GravityModel gravity) : elements_(el) {
    const GravityConstants gc = constants_for(gravity);
    radius_ = gc.radius;
    xke_ = gc.xke;
    j2_ = gc.j2;
    const double j4 = gc.j4;
    j3oj2_ = gc.j3 / gc.j2;

    const double xpdotp = 1440.0 / (2.0 * pi);
    const double no_kozai = el.mean_motion_rev_per_day / xpdotp;
    bstar_ = el.bstar;
    ecco_ = el.eccentricity;
    inclo_ = el.inclination_deg * deg2rad;
    nodeo_ = el.raan_deg * deg2rad;
    argpo_ = el.arg_perigee_deg * deg2rad;
    mo_ = el.mean_anomaly_deg * deg2rad;

    const double ss = 78.0 / radius_ + 1.0;
    const double qzms2ttemp = (120.0 - 78.0) / radius_;
    const double qzms2t = qzms2ttemp * qzms2ttemp * qzms2ttemp * qzms2ttemp;

    // initl
    const double eccsq = ecco_ * ecco_;
    const double omeosq = 1.0 - eccsq;
    const double rteosq = std::sqrt(omeosq);
    const double cosio = std::cos(inclo_);
    const double cosio2 = cosio * cosio;
    const double ak = std::pow(xke_ / no_kozai, x2o3);
    const double d1 = 0.75 * j2_ * (3.0 * cosio2 - 1.0) / (rteosq * omeosq);
    double del = d1 / (ak * ak);
    const double adel = ak * (1.0 - del * del - del * (1.0 / 3.0 + 134.0 * del * del / 81.0));
    del = d1 / (adel * adel);
    no_unkozai_ = no_kozai / (1.0 + del);
    const double ao = std::pow(xke_ / no_unkozai_, x2o3);
    const double sinio = std::sin(inclo_);
    const double po = ao * omeosq;
    const double con42 = 1.0 - 5.0 * cosio2;
    con41_ = -con42 - cosio2 - cosio2;
    const double posq = po * po;
    const double rp = ao * (1.0 - ecco_);

    if (twopi / no_unkozai_ >= kDeepSpacePeriodMinutes) {
        throw DeepSpaceRejected(el.catalog_id, 0);
    }

    isimp_ = rp < (220.0 / radius_ + 1.0);
    double sfour = ss;
    double qzms24 = qzms2t;
    const double perige = (rp - 1.0) * radius_;
    if (perige < 156.0) {
        sfour = perige - 78.0;
        if (perige < 98.0) sfour = 20.0;
        const double qzms24temp = (120.0 - sfour) / radius_;
        qzms24 = qzms24temp * qzms24temp * qzms24temp * qzms24temp;
        sfour = sfour / radius_ + 1.0;
    }
    const double pinvsq = 1.0 / posq;
    const double tsi = 1.0 / (ao - sfour);
    eta_ = ao * ecco_ * tsi;
    const double etasq = eta_ * eta_;
    const double eeta = ecco_ * eta_;
    const double psisq = std::fabs(1.0 - etasq);
    const double coef = qzms24 * std::pow(tsi, 4.0);
    const double coef1 = coef / std::pow(psisq, 3.5);
    const double cc2 = coef1 * no_unkozai_ *
                       (ao * (1.0 + 1.5 * etasq + eeta * (4.0 + etasq)) +
                        0.375 * j2_ * tsi / psisq * con41_ * (8.0 + 3.0 * etasq * (8.0 + etasq)));
    cc1_ = bstar_ * cc2;
    double cc3 = 0.0;
    if (ecco_ > 1.0e-4) cc3 = -2.0 * coef * tsi * j3oj2_ * no_unkozai_ * sinio / ecco_;
    x1mth2_ = 1.0 - cosio2;
    cc4_ = 2.0 * no_unkozai_ * coef1 * ao * omeosq *
           (eta_ * (2.0 + 0.5 * etasq) + ecco_ * (0.5 + 2.0 * etasq) -
            j2_ * tsi / (ao * psisq) *
                (-3.0 * con41_ * (1.0 - 2.0 * eeta + etasq * (1.5 - 0.5 * eeta)) +
                 0.75 * x1mth2_ * (2.0 * etasq - eeta * (1.0 + etasq)) * std::cos(2.0 * argpo_)));
    cc5_ = 2.0 * coef1 * ao * omeosq * (1.0 + 2.75 * (etasq + eeta) + eeta * etasq);
    const double cosio4 = cosio2 * cosio2;
    const double temp1 = 1.5 * j2_ * pinvsq * no_unkozai_;
    const double temp2 = 0.5 * temp1 * j2_ * pinvsq;
    const double temp3 = -0.46875 * j4 * pinvsq * pinvsq * no_unkozai_;
    mdot_ = no_unkozai_ + 0.5 * temp1 * rteosq * con41_ +
            0.0625 * temp2 * rteosq * (13.0 - 78.0 * cosio2 + 137.0 * cosio4);
    argpdot_ = -0.5 * temp1 * con42 + 0.0625 * temp2 * (7.0 - 114.0 * cosio2 + 395.0 * cosio4) +
               temp3 * (3.0 - 36.0 * cosio2 + 49.0 * cosio4);
    const double xhdot1 = -temp1 * cosio;
    nodedot_ = xhdot1 + (0.5 * temp2 * (4.0 - 19.0 * cosio2) + 2.0 * temp3 * (3.0 - 7.0 * cosio2)) * cosio;
    omgcof_ = bstar_ * cc3 * std::cos(argpo_);
    xmcof_ = 0.0;
    if (ecco_ > 1.0e-4) xmcof_ = -x2o3 * coef * bstar_ / eeta;
    nodecf_ = 3.5 * omeosq * xhdot1 * cc1_;
    t2cof_ = 1.5 * cc1_;
    if (std::fabs(cosio + 1.0) > 1.5e-12) {
        xlcof_ = -0.25 * j3oj2_ * sinio * (3.0 + 5.0 * cosio) / (1.0 + cosio);
    } else {
        xlcof_ = -0.25 * j3oj2_ * sinio * (3.0 + 5.0 * cosio) / 1.5e-12;
    }
    aycof_ = -0.5 * j3oj2_ * sinio;
    const double delmotemp = 1.0 + eta_ * std::cos(mo_);
    delmo_ = delmotemp * delmotemp * delmotemp;
    sinmao_ = std::sin(mo_);
    x7thm1_ = 7.0 * cosio2 - 1.0;

    if (!isimp_) {
        const double cc1sq = cc1_ * cc1_;
        d2_ = 4.0 * ao * tsi * cc1sq;
        const double temp = d2_ * tsi * cc1_ / 3.0;
        d3_ = (17.0 * ao + sfour) * temp;
        d4_ = 0.5 * temp * ao * tsi * (221.0 * ao + 31.0 * sfour) * cc1_;
        t3cof_ = d2_ + 2.0 * cc1sq;
        t4cof_ = 0.25 * (3.0 * d3_ + cc1_ * (12.0 * d2_ + 10.0 * cc1sq));
        t5cof_ = 0.2 * (3.0 * d4_ + 12.0 * cc1_ * d3_ + 6.0 * d2_ * d2_ + 15.0 * cc1sq * (2.0 * d2_ + cc1sq));
    }

    // The reference implementation evaluates t = 0 during initialisation and
    // flags elements that are already invalid there.
    (void)propagate_minutes(0.0);
}

StateVector Sgp4::propagate(UtcTime at) const {
    const double minutes = minutes_between(elements_.epoch, at);
    if (std::fabs(minutes) > kMaxPropagationDays * 1440.0) {
        throw EpochTooFar(elements_.catalog_id, minutes / 1440.0);
    }
    StateVector s = propagate_minutes(minutes);
    s.epoch = at;
    return s;
}

StateVector Sgp4::propagate_minutes(double t) const {
    const double vkmpersec = radius_ * xke_ / 60.0;

    const double xmdf = mo_ + mdot_ * t;
    const double argpdf = argpo_ + argpdot_ * t;
    const double nodedf = nodeo_ + nodedot_ * t;
    double argpm = argpdf;
    double mm = xmdf;
    const double t2 = t * t;
    double nodem = nodedf + nodecf_ * t2;
    double tempa = 1.0 - cc1_ * t;
    double tempe = bstar_ * cc4_ * t;
    double templ = t2cof_ * t2;

    if (!isimp_) {
        const double delomg = omgcof_ * t;
        const double delmtemp = 1.0 + eta_ * std::cos(xmdf);
        const double delm = xmcof_ * (delmtemp * delmtemp * delmtemp - delmo_);
        const double temp = delomg + delm;
        mm = xmdf + temp;
        argpm = argpdf - temp;
        const double t3 = t2 * t;
        const double t4 = t3 * t;
        tempa = tempa - d2_ * t2 - d3_ * t3 - d4_ * t4;
        tempe = tempe + bstar_ * cc5_ * (std::sin(mm) - sinmao_);
        templ = templ + t3cof_ * t3 + t4 * (t4cof_ + t * t5cof_);
    }

    double nm = no_unkozai_;
    double em = ecco_;
    const double inclm = inclo_;
    if (nm <= 0.0) throw PropagationDiverged(elements_.catalog_id, 2, t);

    const double am = std::pow(xke_ / nm, x2o3) * tempa * tempa;
    nm = xke_ / std::pow(am, 1.5);
    em = em - tempe;
    if (em >= 1.0 || em < -0.001) throw PropagationDiverged(elements_.catalog_id, 1, t);
    if (em < 1.0e-6) em = 1.0e-6;
    mm = mm + no_unkozai_ * templ;
    double xlm = mm + argpm + nodem;

    nodem = std::fmod(nodem, twopi);
    argpm = std::fmod(argpm, twopi);
    xlm = std::fmod(xlm, twopi);
    mm = std::fmod(xlm - argpm - nodem, twopi);

    const double sinip = std::sin(inclm);
    const double cosip = std::cos(inclm);
    const double ep = em;
    const double xincp = inclm;
    const double argpp = argpm;
    const double nodep = nodem;
    const double mp = mm;

    // Long-period periodics.
    const double axnl = ep * std::cos(argpp);
    double temp = 1.0 / (am * (1.0 - ep * ep));
    const double aynl = ep * std::sin(argpp) + temp * aycof_;
    const double xl = mp + argpp + nodep + temp * xlcof_ * axnl;

    // Kepler's equation.
    const double u = std::fmod(xl - nodep, twopi);
    double eo1 = u;
    double tem5 = 9999.9;
    double sineo1 = 0.0;
    double coseo1 = 0.0;
    for (int ktr = 1; std::fabs(tem5) >= 1.0e-12 && ktr <= 10; ++ktr) {
        sineo1 = std::sin(eo1);
        coseo1 = std::cos(eo1);
        tem5 = 1.0 - coseo1 * axnl - sineo1 * aynl;
        tem5 = (u - aynl * coseo1 + axnl * sineo1 - eo1) / tem5;
        if (std::fabs(tem5) >= 0.95) tem5 = tem5 > 0.0 ? 0.95 : -0.95;
        eo1 = eo1 + tem5;
    }

    // Short-period periodics.
    const double ecose = axnl * coseo1 + aynl * sineo1;
    const double esine = axnl * sineo1 - aynl * coseo1;
    const double el2 = axnl * axnl + aynl * aynl;
    const double pl = am * (1.0 - el2);
    if (pl < 0.0) throw PropagationDiverged(elements_.catalog_id, 4, t);

    const double rl = am * (1.0 - ecose);
    const double rdotl = std::sqrt(am) * esine / rl;
    const double rvdotl = std::sqrt(pl) / rl;
    const double betal = std::sqrt(1.0 - el2);
    temp = esine / (1.0 + betal);
    const double sinu = am / rl * (sineo1 - aynl - axnl * temp);
    const double cosu = am / rl * (coseo1 - axnl + aynl * temp);
    double su = std::atan2(sinu, cosu);
    const double sin2u = (cosu + cosu) * sinu;
    const double cos2u = 1.0 - 2.0 * sinu * sinu;
    temp = 1.0 / pl;
    const double temp1 = 0.5 * j2_ * temp;
    const double temp2 = temp1 * temp;

    const double mrt = rl * (1.0 - 1.5 * temp2 * betal * con41_) + 0.5 * temp1 * x1mth2_ * cos2u;
    su = su - 0.25 * temp2 * x7thm1_ * sin2u;
    const double xnode = nodep + 1.5 * temp2 * cosip * sin2u;
    const double xinc = xincp + 1.5 * temp2 * cosip * sinip * cos2u;
    const double mvt = rdotl - nm * temp1 * x1mth2_ * sin2u / xke_;
    const double rvdot = rvdotl + nm * temp1 * (x1mth2_ * cos2u + 1.5 * con41_) / xke_;

    const double sinsu = std::sin(su);
    const double cossu = std::cos(su);
    const double snod = std::sin(xnode);
    const double cnod = std::cos(xnode);
    const double sini = std::sin(xinc);
    const double cosi = std::cos(xinc);
    const double xmx = -snod * cosi;
    const double xmy = cnod * cosi;
    const double ux = xmx * sinsu + cnod * cossu;
    const double uy = xmy * sinsu + snod * cossu;
    const double uz = sini * sinsu;
    const double vx = xmx * cossu - cnod * sinsu;
    const double vy = xmy * cossu - snod * sinsu;
    const double vz = sini * cossu;

    if (mrt < 1.0) throw PropagationDiverged(elements_.catalog_id, 6, t);

    StateVector s;
    s.epoch = add_seconds(elements_.epoch, t * 60.0);
    s.position = {mrt * ux * radius_, mrt * uy * radius_, mrt * uz * radius_};
    s.velocity = {(mvt * ux + rvdot * vx) * vkmpersec, (mvt * uy + rvdot * vy) * vkmpersec,
                  (mvt * uz + rvdot * vz) * vkmpersec};
    return s;
}

StateVector propagate(const OrbitalElements& elements, UtcTime at, GravityModel gravity) {
    return Sgp4(elements, gravity).propagate(at);
}

}  // namespace ssu
