"""Deterministic synthetic documents for the property and scale tests."""
from __future__ import annotations

import random

FIRST_NAMES = ["Laurent", "Simone", "Alassane", "Charles", "Guillaume", "Henri", "Aminata", "Seydou", "Kofi"]
CITIES = ["Abidjan", "Bouaké", "Yamoussoukro", "Korhogo", "Pristina", "Mitrovica", "Prizren", "Belgrade", "Dakar"]
MONTHS = ["janvier", "février", "mars", "avril", "mai", "juin", "juillet", "août", "septembre", "octobre"]
ORGS = ["Orange Télécom", "Sahel Airlines", "Atlantique Assurances", "Ivoire Industries"]
SYLLABLES = ["ba", "go", "ko", "ne", "dia", "wa", "ta", "ra", "lo", "mi", "dou", "sa", "fa", "zi"]


def surname(rng: random.Random) -> str:
    """An invented capitalized surname absent from the sample dictionaries."""
    word = "".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 3)))
    return word.capitalize() + "x"


def two_pass_document(rng: random.Random, k: int) -> tuple[str, str, str]:
    """A document naming a person in full once, then by surname ``k`` times.

    Returns ``(text, first_name, surname)``.
    """
    first = rng.choice(FIRST_NAMES)
    last = surname(rng)
    city = rng.choice(CITIES)
    parts = [f"Le président {first} {last} est arrivé à {city} le {rng.randint(1, 28)} {rng.choice(MONTHS)}."]
    bare = [
        "Selon des sources proches du gouvernement, {s} a rencontré les rebelles.",
        "Hier, le parti de {s} a déclaré que la visite est reportée.",
        "Les partisans de {s} ont manifesté à {c}.",
        "Pour {s}, cet accord est une étape.",
        "La dépêche précise que {s} a quitté {c} depuis 3 jours.",
    ]
    fillers = [
        "Le traité est signé depuis 2 ans.",
        "La société Ivoire Industries a annoncé un accord.",
        "Les rebelles ont quitté la ville de Korhogo.",
    ]
    for _ in range(k):
        if rng.random() < 0.4:
            parts.append(rng.choice(fillers))
        parts.append(rng.choice(bare).format(s=last, c=rng.choice(CITIES)))
    return " ".join(parts), first, last


NEWS_TEMPLATES = [
    "{city}, le {day} {month} 2002. Le président {first} {last} a rencontré le ministre {last2} à {city2}.",
    "Le groupe {org} prend le contrôle de {org2}.",
    "Selon la société {org}, le Quai d'Orsay se trouve dans l'impossibilité d'affirmer que les rebelles ont quitté {city}.",
    "Le Quai d'Orsay se trouve à Paris, rue de Montreuil.",
    "{last} a déclaré hier que l'ONU et l'UEMOA soutiennent la {country}.",
    "Madame {first2} {last2} est arrivée à l'aéroport de {city} à 14 h 30.",
    "Éternel {last} ! ÉTERNEL {last} !",
    "Les forces de la MINUK patrouillent au {region} depuis 3 semaines, a précisé {last}.",
    "{first} {last} et {first2} {last2} ont signé un accord à {city2} le {day} {month}.",
    "CÔTE D'IVOIRE : {last2} A {city_up}",
    "A {city}, la Seine et le lac {lake} ne sont pas concernés.",
    "Les {last} de N'Djamena ont rejoint le mouvement {org}.",
]


def news_corpus(target_chars: int = 1_000_000, seed: int = 2007) -> str:
    """Paragraphs of news-wire style sentences, at least ``target_chars`` long."""
    rng = random.Random(seed)
    people = [(rng.choice(FIRST_NAMES), surname(rng)) for _ in range(60)]
    chunks: list[str] = []
    size = 0
    while size < target_chars:
        sentences = []
        for _ in range(rng.randint(3, 8)):
            first, last = rng.choice(people)
            first2, last2 = rng.choice(people)
            city = rng.choice(CITIES)
            s = rng.choice(NEWS_TEMPLATES).format(
                city=city,
                city2=rng.choice(CITIES),
                city_up=city.upper(),
                day=rng.randint(1, 28),
                month=rng.choice(MONTHS),
                first=first,
                last=last,
                first2=first2,
                last2=last2,
                org=rng.choice(ORGS),
                org2=rng.choice(ORGS),
                country=rng.choice(["Côte d'Ivoire", "France", "Serbie"]),
                region=rng.choice(["Kosovo", "Mali"]),
                lake=rng.choice(["Kossou", "Buyo"]),
            )
            sentences.append(s)
        para = " ".join(sentences) + "\n\n"
        chunks.append(para)
        size += len(para)
    return "".join(chunks)
