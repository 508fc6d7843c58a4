#!/usr/bin/env python3
"""Writes the bundled desk-scale reference tables into refdata/.

The tables are reconstructions for testing and demonstration: name lists
are small hand-picked samples, incidences are synthetic magnitudes and
populations are rounded public figures (circa 2020). Regenerating full
tables from census and name-frequency sources follows the same column
layout (see refdata/README.md).

Usage: python3 tools/build_fixture_refdata.py refdata/
"""
import hashlib
import os
import sys

PLACES = {
    "Africa": [
        ("Africa/Lagos", 206_000_000), ("Africa/Cairo", 102_000_000), ("Africa/Johannesburg", 59_000_000),
        ("Africa/Nairobi", 53_000_000), ("Africa/Casablanca", 37_000_000), ("Africa/Accra", 31_000_000),
        ("Africa/Abidjan", 26_000_000), ("Africa/Algiers", 43_000_000), ("Africa/Addis_Ababa", 115_000_000),
        ("Africa/Dakar", 16_000_000), ("Indian/Mauritius", 1_270_000),
    ],
    "Australia and New Zealand": [
        ("Australia/Sydney", 8_200_000), ("Australia/Melbourne", 6_700_000), ("Australia/Brisbane", 5_200_000),
        ("Australia/Perth", 2_700_000), ("Australia/Adelaide", 1_800_000), ("Pacific/Auckland", 5_100_000),
    ],
    "Central and South America": [
        ("America/Sao_Paulo", 212_000_000), ("America/Mexico_City", 126_000_000),
        ("America/Argentina/Buenos_Aires", 45_000_000), ("America/Bogota", 51_000_000),
        ("America/Lima", 33_000_000), ("America/Santiago", 19_000_000), ("America/Caracas", 28_000_000),
        ("America/Havana", 11_000_000),
    ],
    "Central and South Asia": [
        ("Asia/Kolkata", 1_380_000_000), ("Asia/Karachi", 220_000_000), ("Asia/Dhaka", 165_000_000),
        ("Asia/Tehran", 84_000_000), ("Asia/Tashkent", 34_000_000), ("Asia/Almaty", 19_000_000),
        ("Asia/Kathmandu", 29_000_000), ("Asia/Colombo", 21_000_000),
    ],
    "China": [
        ("Asia/Shanghai", 1_400_000_000), ("Asia/Urumqi", 25_000_000), ("Asia/Hong_Kong", 7_500_000),
    ],
    "East Asia": [
        ("Asia/Tokyo", 126_000_000), ("Asia/Seoul", 52_000_000), ("Asia/Taipei", 24_000_000),
        ("Asia/Ulaanbaatar", 3_300_000), ("Asia/Pyongyang", 25_000_000),
    ],
    "Europe": [
        ("Europe/London", 67_000_000), ("Europe/Paris", 67_000_000), ("Europe/Berlin", 83_000_000),
        ("Europe/Rome", 60_000_000), ("Europe/Madrid", 47_000_000), ("Europe/Warsaw", 38_000_000),
        ("Europe/Kiev", 44_000_000), ("Europe/Lisbon", 10_000_000), ("Europe/Helsinki", 5_500_000),
        ("Europe/Athens", 10_700_000), ("Europe/Stockholm", 10_000_000), ("Europe/Dublin", 5_000_000),
        ("Europe/Minsk", 9_400_000), ("Atlantic/Reykjavik", 360_000),
    ],
    "North America": [
        ("America/New_York", 140_000_000), ("America/Chicago", 100_000_000), ("America/Denver", 25_000_000),
        ("America/Phoenix", 7_000_000), ("America/Los_Angeles", 55_000_000), ("America/Toronto", 23_000_000),
        ("America/Vancouver", 5_000_000), ("America/Anchorage", 700_000), ("Pacific/Honolulu", 1_400_000),
        ("America/Halifax", 2_400_000), ("America/St_Johns", 500_000),
    ],
    "Pacific": [
        ("Pacific/Port_Moresby", 9_000_000), ("Pacific/Fiji", 900_000), ("Pacific/Guam", 170_000),
        ("Pacific/Tahiti", 280_000), ("Pacific/Noumea", 270_000), ("Pacific/Palau", 18_000),
    ],
    "Russia": [
        ("Europe/Moscow", 102_000_000), ("Europe/Samara", 3_200_000), ("Asia/Yekaterinburg", 12_000_000),
        ("Asia/Omsk", 2_000_000), ("Asia/Novosibirsk", 10_000_000), ("Asia/Krasnoyarsk", 6_000_000),
        ("Asia/Irkutsk", 2_400_000), ("Asia/Yakutsk", 1_000_000), ("Asia/Vladivostok", 2_000_000),
        ("Europe/Kaliningrad", 1_000_000), ("Asia/Magadan", 140_000), ("Asia/Kamchatka", 310_000),
    ],
    "South-eastern Asia": [
        ("Asia/Jakarta", 200_000_000), ("Asia/Makassar", 45_000_000), ("Asia/Jayapura", 5_000_000),
        ("Asia/Manila", 110_000_000), ("Asia/Bangkok", 70_000_000), ("Asia/Ho_Chi_Minh", 97_000_000),
        ("Asia/Kuala_Lumpur", 32_000_000), ("Asia/Singapore", 5_700_000), ("Asia/Yangon", 54_000_000),
    ],
    "West Asia": [
        ("Asia/Baku", 10_000_000), ("Asia/Dubai", 9_900_000), ("Asia/Muscat", 5_100_000),
        ("Asia/Tbilisi", 3_700_000), ("Asia/Yerevan", 3_000_000), ("Asia/Jerusalem", 9_200_000),
        ("Europe/Istanbul", 84_000_000), ("Asia/Riyadh", 35_000_000), ("Asia/Baghdad", 40_000_000),
        ("Asia/Beirut", 6_800_000), ("Asia/Amman", 10_000_000),
    ],
}

CCTLD = {
    "Africa": "ng eg za ke ma gh ci dz et sn mu",
    "Australia and New Zealand": "au nz",
    "Central and South America": "br mx ar co pe cl ve cu",
    "Central and South Asia": "in pk bd ir uz kz np lk",
    "China": "cn hk",
    "East Asia": "jp kr tw mn kp",
    "Europe": "uk fr de it es pl ua pt fi gr se ie by is nl be at ch cz no dk hu ro",
    "North America": "us ca",
    "Pacific": "pg fj gu pf nc pw",
    "Russia": "ru",
    "South-eastern Asia": "id ph th vn my sg mm",
    "West Asia": "az ae om ge am il tr sa iq lb jo",
}

# Region-specific names: (male, female, andy, mostly_male, mostly_female, surnames)
NAMES = {
    "Africa": ("Chinedu Kwame Tunde Abebe Sipho Kofi", "Ngozi Amara Chiamaka Thandiwe Abena Zainab",
               "Ayo", "Jabari", "Nia", "Okafor Mensah Adeyemi Nkosi Kamau Diallo Tesfaye Boateng"),
    "Australia and New Zealand": ("Bruce Lachlan Hamish Wiremu Callum Angus", "Matilda Kylie Sheila Aroha Bronwyn Tegan",
               "Kai", "Brodie", "Kirra", "Wilkinson Murray Ngata Tipene Kelly Fraser Parata Mcleod"),
    "Central and South America": ("Joao Diego Santiago Mateo Rodrigo Thiago", "Camila Valentina Ximena Juliana Fernanda Luciana",
               "Guadalupe", "Cruz", "Rocio", "Silva Gonzalez Rodrigues Hernandez Pereira Ramirez Oliveira Castillo"),
    "Central and South Asia": ("Rajesh Arjun Imran Vikram Farhad Rustam", "Priya Ananya Fatima Shirin Lakshmi Gulnara",
               "Kiran", "Sunil", "Sita", "Sharma Patel Khan Hossain Karimov Nazarbayev Perera Shrestha"),
    "China": ("Jian Hao Qiang Tao Bo Gang", "Fang Xiu Ying Jing Mei Yan",
              "Wei", "Jun", "Ling", "Wang Zhang Liu Chen Yang Huang Zhao Zhou"),
    "East Asia": ("Hiroshi Takashi Kenji Satoshi Minjun Jisung", "Haruka Yumiko Sakura Keiko Jiyeon Soyeon",
                  "Yuki", "Akira", "Hina", "Sato Suzuki Takahashi Tanaka Watanabe Park Choi Bat"),
    "Europe": ("Jean Paul Giovanni Klaus Piotr Olaf", "Marie Anna Sophie Ingrid Katarzyna Giulia",
               "Andrea", "Dominique", "Lena", "Rossi Dupont Muller Kowalski Johansson Murphy Ferreira Papadopoulos"),
    "North America": ("Bradley Tyler Cody Brandon Dwayne Chad", "Ashley Brittany Kayla Megan Tiffany Madison",
                      "Jordan", "Casey", "Jamie", "Johnson Williams Anderson Thompson Jackson Tremblay Gagnon Harris"),
    "Pacific": ("Tevita Sione Iosefa Manu Kalani Ratu", "Mele Losana Vai Moana Leilani Talia",
                "Tui", "Koa", "Lani", "Tupou Vaka Fonua Leota Tuilagi Kaufana Bainimarama Temaru"),
    "Russia": ("Dmitry Sergei Vladimir Nikolai Alexei Igor", "Olga Natalia Svetlana Tatiana Ekaterina Irina",
               "Sasha", "Zhenya", "Valya", "Ivanov Smirnov Kuznetsov Popov Sokolov Lebedev Kozlov Novikov"),
    "South-eastern Asia": ("Budi Agus Somchai Minh Jose Rizal", "Siti Dewi Malai Linh Maricel Nurul",
                           "Ratna", "Hendra", "Ayu", "Santoso Wijaya Sukarno Tran Pham Reyes Bautista Tan"),
    "West Asia": ("Mehmet Ahmet Giorgi Arman Yosef Khalid", "Ayse Elif Nino Anahit Tamar Noor Eli",
                  "Deniz", "Elnur", "Lale", "Yilmaz Kaya Aliyev Beridze Petrosyan Cohen Haddad Mammadov"),
}

# Names shared across regions (deliberately ambiguous for the tz-name technique).
SHARED_FORENAMES = {
    "Maria": ["Europe", "Central and South America"],
    "Ali": ["West Asia", "Central and South Asia", "Africa"],
    "Michael": ["North America", "Europe", "Australia and New Zealand"],
}
SHARED_SURNAMES = {
    "Lee": ["North America", "East Asia"],
    "Smith": ["North America", "Australia and New Zealand", "Europe"],
}

EXTRA_GENDER = [
    ("Maria", "female"), ("Ali", "male"), ("Michael", "male"), ("John", "male"), ("Mary", "female"),
    ("Robin", "andy"), ("Alex", "mostly_male"), ("Jo", "mostly_female"), ("Ada", "female"),
]


def magnitude(*parts, lo, hi):
    h = int(hashlib.sha256("/".join(parts).encode()).hexdigest()[:8], 16) / 0xFFFFFFFF
    return round(lo + (hi - lo) * h, 6)


def main(out):
    os.makedirs(out, exist_ok=True)
    note = "# Reconstructed desk-scale extract; not a published dataset. Built by tools/build_fixture_refdata.py.\n"

    with open(os.path.join(out, "places.tsv"), "w", encoding="utf-8") as f:
        f.write(note + "# Populations are rounded public figures (circa 2020), split by tz identifier.\n")
        f.write("place_id\tregion\tpopulation\n")
        rows = sorted((pid, region, pop) for region, ps in PLACES.items() for pid, pop in ps)
        for pid, region, pop in rows:
            f.write(f"{pid}\t{region}\t{pop}\n")

    with open(os.path.join(out, "cctld.tsv"), "w", encoding="utf-8") as f:
        f.write(note + "# Manual ccTLD to world-region assignment.\n")
        f.write("tld\tregion\n")
        for tld, region in sorted((t, r) for r, ts in CCTLD.items() for t in ts.split()):
            f.write(f"{tld}\t{region}\n")

    gender = {}
    fore_rows, sur_rows = [], []
    for region, (male, female, andy, mmale, mfemale, surnames) in NAMES.items():
        for cls, names in (("male", male), ("female", female), ("andy", andy),
                           ("mostly_male", mmale), ("mostly_female", mfemale)):
            for n in names.split():
                gender[n] = cls
                for pid, _ in PLACES[region]:
                    fore_rows.append((n.lower(), pid, magnitude("f", n, pid, lo=0.0005, hi=0.02)))
        for n in surnames.split():
            for pid, _ in PLACES[region]:
                sur_rows.append((n.lower(), pid, magnitude("s", n, pid, lo=0.001, hi=0.03)))
    for n, regions in SHARED_FORENAMES.items():
        for region in regions:
            for pid, _ in PLACES[region]:
                fore_rows.append((n.lower(), pid, magnitude("f", n, pid, lo=0.0005, hi=0.02)))
    for n, regions in SHARED_SURNAMES.items():
        for region in regions:
            for pid, _ in PLACES[region]:
                sur_rows.append((n.lower(), pid, magnitude("s", n, pid, lo=0.001, hi=0.03)))
    for n, cls in EXTRA_GENDER:
        gender[n] = cls

    # Pinned values used by documentation examples.
    fore_rows = [r for r in fore_rows if not (r[0] == "anna" and r[1] == "Europe/Rome")]
    fore_rows.append(("anna", "Europe/Rome", 0.010))

    with open(os.path.join(out, "gender.tsv"), "w", encoding="utf-8") as f:
        f.write(note + "# Token gender labels: male, mostly_male, unknown, mostly_female, female, andy.\n")
        f.write("name\tclass\n")
        for n in sorted(gender):
            f.write(f"{n}\t{gender[n]}\n")

    for fname, rows in (("forenames.tsv", fore_rows), ("surnames.tsv", sur_rows)):
        with open(os.path.join(out, fname), "w", encoding="utf-8") as f:
            f.write(note + "# Incidence = fraction of the place's population bearing the name.\n")
            f.write("name\tplace_id\tincidence\n")
            for n, pid, v in sorted(rows):
                f.write(f"{n}\t{pid}\t{v:.6f}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "refdata")
