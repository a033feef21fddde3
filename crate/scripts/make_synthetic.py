"""Generate the synthetic fixtures under data/.

The files mimic the layout of league and head-to-head data but every number
is drawn from a seeded generator. Run from the repository root:

    python3 scripts/make_synthetic.py
"""
import csv
import itertools
import random
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent / "data"

TEAMS = [
    "Adlerberg", "Bergstadt", "Choralingen", "Dunkelwald", "Eisenhafen",
    "Falkenrode", "Grunau", "Hochfeld", "Isarbrueck", "Jagdsee",
    "Kaltenbach", "Lindholm", "Moorheim", "Nordtal", "Ostwerder", "Plauenfurt",
]

PLAYERS = [
    "Rafa Ortega (ESP)", "Nikola Dragic (SRB)", "David Serrano (ESP)", "Andrew Muir (GBR)",
    "Juan Pablo Rey (ARG)", "Roland Fischer (SUI)", "Tomas Benda (CZE)", "Stan Wehrli (SUI)",
    "Remi Gaudin (FRA)", "Jules Tessier (FRA)", "Milan Radic (CAN)", "Thomas Hauser (GER)",
    "John Ives (USA)", "Nicolas Almeda (ESP)", "Mikhail Yurin (RUS)", "Fabio Ferri (ITA)",
    "Kenji Nishimura (JPN)",
]


def soccer(rng: np.random.Generator):
    strength = np.sort(rng.normal(0.0, 0.35, len(TEAMS)))[::-1]
    rows = []
    for season in ("2013", "2014"):
        drift = rng.normal(0.0, 0.1, len(TEAMS))
        s = strength + drift
        for h, a in itertools.permutations(range(len(TEAMS)), 2):
            home_rate = np.exp(0.3 + s[h] - s[a])
            away_rate = np.exp(0.05 + s[a] - s[h])
            rows.append((season, TEAMS[h], TEAMS[a], int(rng.poisson(home_rate)), int(rng.poisson(away_rate))))
    with open(ROOT / "soccer" / "matches.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["season", "home", "away", "home_goals", "away_goals"])
        w.writerows(rows)
    with open(ROOT / "soccer" / "ranks.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["rank", "name"])
        w.writerows((i + 1, t) for i, t in enumerate(TEAMS))


def tennis(rng: np.random.Generator):
    n = len(PLAYERS)
    skill = np.linspace(1.6, -1.0, n) + rng.normal(0.0, 0.25, n)
    skill[0] = 3.0
    rows = []
    for i, j in itertools.combinations(range(n), 2):
        # The top player always holds a winning record.
        if i == 0:
            games = int(rng.integers(2, 14))
            wins = int(rng.integers(games // 2 + 1, games + 1))
            rows.append((PLAYERS[i], PLAYERS[j], wins, games - wins))
            continue
        if rng.random() < 0.12:
            continue  # never met
        games = int(rng.integers(1, 20))
        p = 1.0 / (1.0 + np.exp(-(skill[i] - skill[j])))
        wins = int(rng.binomial(games, p))
        if rng.random() < 0.5:
            rows.append((PLAYERS[i], PLAYERS[j], wins, games - wins))
        else:
            rows.append((PLAYERS[j], PLAYERS[i], games - wins, wins))
    with open(ROOT / "tennis" / "h2h.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["player_a", "player_b", "a_wins", "b_wins"])
        w.writerows(rows)
    with open(ROOT / "tennis" / "ranks.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["rank", "name"])
        w.writerows((i + 1, p) for i, p in enumerate(PLAYERS))


def matrix(path: Path, names, beats):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["player", *names])
        for i, name in enumerate(names):
            w.writerow([name, *("0.5" if i == j else ("1" if beats(i, j) else "0") for j in range(len(names)))])


def main():
    rng = np.random.default_rng(20140201)
    soccer(rng)
    tennis(rng)
    cycle = {(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)}
    matrix(ROOT / "cycle4.csv", [f"p{i}" for i in range(4)], lambda i, j: (i, j) in cycle)
    r = random.Random(8)
    upper = {(i, j): r.random() < 0.6 for i, j in itertools.combinations(range(8), 2)}
    matrix(ROOT / "tour8.csv", [f"t{i}" for i in range(8)],
           lambda i, j: upper[(i, j)] if i < j else not upper[(j, i)])


if __name__ == "__main__":
    main()
