"""Synthetic turbine log: one row per sensor reading, other sensor columns empty."""
import csv
import random
from datetime import datetime, timedelta

BASE = datetime(2017, 5, 1)
rng = random.Random(11)


def cycles(begin, count, trips):
    """Yields (speed, power, flame) phase lists for consecutive start/run/stop cycles."""
    speed, power, flame = [], [], []
    t = begin
    for c in range(count):
        j = t + 300
        k = j + 400
        e = k + 60 + rng.randint(1800, 3600)
        speed += [(t, 0, 40), (j, 185, 195), (j + 40, 1280, 1320), (k, 4470, 4530),
                  (k + 60, 6650, 6750), (e, 1370, 1430), (e + 180, 80, 120), (e + 600, 0, 40)]
        flame += [(t, 0.0, 0.05), (j + 200, 1.7, 2.3), (e - 30, 0.0, 0.05)]
        power += [(t, 0.0, 0.1), (k + 120, 1.6, 3.8)]
        if c in trips:
            power += [(e - 60, 0.0, 0.1)]
        else:
            power += [(e - 120, 0.8, 1.2), (e - 60, 0.0, 0.1)]
        t = e + 600 + rng.choice([0, 600, 1200, 2400, 3600])
    return speed, power, flame, t


def sample(phases, end, lo_step, hi_step, digits):
    out = []
    t = phases[0][0] + rng.randint(0, lo_step)
    for i, (start, lo, hi) in enumerate(phases):
        stop = phases[i + 1][0] if i + 1 < len(phases) else end
        while t < stop:
            out.append((t, round(rng.uniform(lo, hi), digits)))
            t += rng.randint(lo_step, hi_step)
    return out


rows = []
for turbine, count, trips, offset in [("tb0", 4, {1}, 0), ("tb1", 4, {2, 3}, 1700)]:
    speed, power, flame, end = cycles(offset, count, trips)
    for col, series in [(3, sample(speed, end, 3, 9, 0)), (2, sample(power, end, 4, 10, 3)),
                        (4, sample(flame, end, 40, 80, 2))]:
        for t, v in series:
            row = [turbine, (BASE + timedelta(seconds=t)).strftime("%Y-%m-%d %H:%M:%S"), "", "", ""]
            row[col] = str(int(v)) if col == 3 else str(v)
            rows.append(row)
rows.sort(key=lambda r: (r[1], r[0]))
with open("turbine.csv", "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["turbine_id", "date_time", "active_power", "rotor_speed", "main_flame"])
    w.writerows(rows)
