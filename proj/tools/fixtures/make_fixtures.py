#!/usr/bin/env python3
"""Regenerates the bundled fixture data under data/.

The relay snapshot is a synthetic Starlink-like constellation laid out as
Walker shells (inclinations/altitudes of the publicly announced shells,
7,061 objects in total). EO fleets mimic sun-synchronous imaging flocks.
Everything is deterministic; rerunning produces byte-identical files.
"""
import csv
import json
import math
import os
import random

MU = 398600.8          # km^3/s^2, WGS-72
RE = 6378.135          # km, WGS-72
EPOCH_YY = 25
EPOCH_DOY = 60.0       # 2025-03-01 00:00:00 UTC

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..", "data")


def checksum(line):
    total = 0
    for c in line[:68]:
        if c.isdigit():
            total += int(c)
        elif c == "-":
            total += 1
    return str(total % 10)


def exp_field(value):
    """Formats a value as the TLE implied-decimal ' 12345-3' field."""
    if value == 0:
        return " 00000-0"
    sign = "-" if value < 0 else " "
    v = abs(value)
    exp = math.floor(math.log10(v)) + 1
    mant = round(v / 10 ** exp * 1e5)
    if mant >= 100000:
        mant //= 10
        exp += 1
    esign = "-" if exp < 0 else "+"
    if exp == 0:
        esign = "-"
    return f"{sign}{mant:05d}{esign}{abs(exp)}"


def mean_motion(alt_km):
    a = RE + alt_km
    n = math.sqrt(MU / a ** 3)
    return n * 86400.0 / (2.0 * math.pi)


def tle(name, satnum, intl, incl, raan, ecc, argp, ma, nmo, bstar, ndot=0.0, elnum=999, rev=1000):
    ndot_s = f"{ndot:.8f}".replace("0.", ".", 1)
    if ndot >= 0:
        ndot_s = " " + ndot_s
    l1 = f"1 {satnum:05d}U {intl:<8} {EPOCH_YY:02d}{EPOCH_DOY:012.8f} {ndot_s} {exp_field(0.0)} {exp_field(bstar)} 0 {elnum:4d}"
    ecc_s = f"{ecc:.7f}"[2:]
    l2 = (f"2 {satnum:05d} {incl % 180:8.4f} {raan % 360:8.4f} {ecc_s} {argp % 360:8.4f} "
          f"{ma % 360:8.4f} {nmo:11.8f}{rev % 100000:5d}")
    assert len(l1) == 68 and len(l2) == 68, (l1, l2)
    return [name, l1 + checksum(l1), l2 + checksum(l2)]


# (name, inclination deg, altitude km, planes, sats per plane, phasing F, raan offset deg)
SHELLS = [
    ("G1A", 53.0, 550.0, 72, 22, 39, 0.0),
    ("G1B", 53.2, 540.0, 72, 22, 17, 2.5),
    ("G1C", 70.0, 570.0, 36, 20, 11, 1.0),
    ("G1P", 97.6, 560.0, 12, 36, 5, 0.0),
    ("G2A", 43.0, 530.0, 48, 30, 13, 3.7),
    ("G2B", 43.0, 559.0, 36, 36, 7, 5.3),
]
RAISING = 5  # recently launched objects still raising orbit


def relay_snapshot(rng):
    recs = []
    satnum = 44000
    serial = 1000
    for shell, incl, alt, planes, per, phasing, raan0 in SHELLS:
        nmo = mean_motion(alt)
        total = planes * per
        for p in range(planes):
            raan = raan0 + 360.0 * p / planes + rng.uniform(-0.05, 0.05)
            for s in range(per):
                ma = 360.0 * s / per + 360.0 * phasing * p / total + rng.uniform(-0.2, 0.2)
                ecc = 0.0001 + rng.uniform(0.0, 0.0001)
                recs.append(tle(f"STARLINK-{serial}", satnum, f"19{shell[:3]}", incl + rng.uniform(-0.005, 0.005),
                                raan, ecc, 90.0 + rng.uniform(-10, 10), ma - 90.0,
                                nmo + rng.uniform(-1e-5, 1e-5), 1.0e-4 + rng.uniform(0, 1e-4), ndot=0.00001))
                satnum += 1
                serial += 1
    for k in range(RAISING):
        recs.append(tle(f"STARLINK-{serial}", satnum, "25012", 53.05, 40.0 + 3 * k, 0.0005, 120.0,
                        72.0 * k, mean_motion(360.0 + 10 * k), 5.0e-4, ndot=0.00002))
        satnum += 1
        serial += 1
    return recs


# EO planes: (raan relative to a polar relay plane, count, altitude, inclination)
EO_PLANES = [
    (1.5, 23, 475.0, 97.40),
    (4.0, 23, 490.0, 97.45),
    (-3.0, 23, 505.0, 97.50),
    (7.0, 22, 515.0, 97.48),
    (14.0, 22, 525.0, 97.55),
]


def eo_fleet(rng):
    recs = []
    satnum = 47000
    serial = 0
    for k, (droff, count, alt, incl) in enumerate(EO_PLANES):
        raan = 30.0 * (2 * k + 1) + droff
        nmo = mean_motion(alt)
        for s in range(count):
            # flocks fly in loose trains, a few degrees apart
            ma = 360.0 * s / count + rng.uniform(-1.0, 1.0)
            recs.append(tle(f"FLOCK-{k + 4}{chr(65 + s // 10)}-{s % 10 + 1}", satnum, "21EOF", incl, raan, 0.0010,
                            60.0 + rng.uniform(0, 30), ma, nmo, 2.0e-4, ndot=0.00001))
            satnum += 1
            serial += 1
    return recs


def write_tle(path, recs, three_line=True):
    with open(path, "w", newline="\n") as f:
        for name, l1, l2 in recs:
            if three_line:
                f.write(name + "\n")
            f.write(l1 + "\n" + l2 + "\n")


POPS = [
    # id, lat, lon, delay clear ms, loss clear
    ("chicago", 41.88, -87.63, 38.0, 0.0090),
    ("dallas", 32.78, -96.80, 45.0, 0.0095),
    ("denver", 39.74, -104.99, 35.0, 0.0085),
    ("frankfurt", 50.11, 8.68, 28.0, 0.0027),
    ("lagos", 6.52, 3.38, 60.0, 0.0160),
    ("new_york", 40.71, -74.01, 32.0, 0.0045),
    ("seattle", 47.61, -122.33, 30.0, 0.0080),
]
WEATHER_LOSS = {"clear": 1.0, "cloud": 1.12, "rain": 1.3644, "snow": 1.45}
WEATHER_DELAY = {"clear": 1.0, "cloud": 1.04, "rain": 1.10, "snow": 1.15}
TIERS = {"standard": 7.5e6, "roam": 10.0e6, "priority": 16.5e6, "business": 30.0e6}


def pop_profiles():
    pops = []
    for pid, lat, lon, delay, loss in POPS:
        pops.append({
            "pop_id": pid,
            "lat": lat,
            "lon": lon,
            "serving_radius_km": 800.0,
            "weather": {w: {"loss_rate": round(loss * WEATHER_LOSS[w], 6),
                            "delay_ms": round(delay * WEATHER_DELAY[w], 3)} for w in WEATHER_LOSS},
            "tier_rates_bps": TIERS,
        })
    return {"schema": "ssu-pop-profiles", "version": 1, "pops": pops}


def weather_trace(rng):
    climate = {"chicago": ["clear", "cloud", "snow", "snow"], "seattle": ["rain", "cloud", "rain", "clear"],
               "lagos": ["clear", "rain", "cloud", "clear"]}
    rows = []
    for pid, *_ in POPS:
        options = climate.get(pid, ["clear", "clear", "cloud", "rain"])
        for hour in range(0, 48, 3):
            day = 1 + hour // 24
            rows.append((pid, f"2025-03-{day:02d}T{hour % 24:02d}:00:00Z", rng.choice(options)))
    return rows


def main():
    rng = random.Random(20250301)
    relays = relay_snapshot(rng)
    write_tle(os.path.join(ROOT, "tle", "starlink_snapshot.tle"), relays)
    write_tle(os.path.join(ROOT, "tle", "starlink_1000.tle"), relays[::7][:1000])
    fleet = eo_fleet(rng)
    write_tle(os.path.join(ROOT, "tle", "eo_fleet.tle"), fleet)
    # 20 EO satellites, four from each plane
    desk = [fleet[p * 23 + i] if p < 3 else fleet[69 + (p - 3) * 22 + i] for p in range(5) for i in range(4)]
    write_tle(os.path.join(ROOT, "tle", "eo_fleet_20.tle"), desk)
    write_tle(os.path.join(ROOT, "tle", "eo_polar.tle"), [fleet[0]])
    write_tle(os.path.join(ROOT, "tle", "eo_midlat.tle"),
              [tle("EO-MIDLAT-1", 48001, "24EOM", 53.0, 17.0, 0.0008, 45.0, 10.0, mean_motion(475.0), 2.0e-4,
                   ndot=0.00001)])
    with open(os.path.join(ROOT, "pops", "pops.json"), "w") as f:
        json.dump(pop_profiles(), f, indent=2)
        f.write("\n")
    with open(os.path.join(ROOT, "weather", "weather.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["location_id", "epoch_utc", "weather_class"])
        w.writerows(weather_trace(rng))


if __name__ == "__main__":
    main()
