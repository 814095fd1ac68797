#!/usr/bin/env python3
"""Writes the bundled mini-corpus: 200 synthetic newswire-like documents, 12 title-only
topics and graded qrels. Every word is drawn from the lists below, so the text carries no
third-party content. Deterministic for a given seed.

    python3 generate.py [outdir]
"""
import random
import sys
from pathlib import Path

SEED = 20240917

TOPICS = {
    301: ("air traffic control", "air traffic control airport pilot runway radar flight controller aircraft"),
    302: ("volcanic eruption", "volcanic eruption lava magma ash crater seismic geologist summit evacuation"),
    303: ("apple orchard", "apple orchard harvest blossom cider pruning grower frost pesticide fruit"),
    304: ("freight railway", "freight railway locomotive station passenger track signal timetable carriage junction"),
    305: ("whale migration", "whale migration ocean dolphin marine harpoon krill pod sonar conservation"),
    306: ("bread bakery", "bread bakery flour oven yeast dough baker pastry loaf wheat"),
    307: ("chess tournament", "chess tournament grandmaster opening checkmate bishop knight pawn rook gambit"),
    308: ("glacier melting", "glacier melting ice climate arctic iceberg snowfall meltwater expedition polar"),
    309: ("library manuscript", "library manuscript book librarian catalogue archive reading shelf lending literacy"),
    310: ("coal mine", "coal mine miner shaft colliery strike union tunnel explosion safety"),
    311: ("vaccine trial", "vaccine trial virus immunization clinic dose epidemic outbreak antibody nurse"),
    312: ("suspension bridge", "suspension bridge engineer cable steel span construction concrete toll river"),
}

GENERAL = """people government year report new city time week group official plan public local
national state company market money price cost percent month day morning evening family children
school house street water road office minister council committee meeting decision law court police
country world history service system information program project problem question issue result
change increase decline support policy interest level number area region center member board
director president chairman spokesman statement news press television radio newspaper letter
visit travel weather summer winter spring autumn north south east west small large major early
late recent former general special annual final total important possible likely several many few
long short high low strong open said told announced expected reported agreed added made found took
gave called asked began continued according also however while after before during about from have
which would could""".split()

STOPWORDS = "the of and to in a is was for on that with by as at be it".split()


def zipf_weights(n, s=1.0):
    return [1.0 / (i + 1) ** s for i in range(n)]


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent
    rng = random.Random(SEED)
    general_w = zipf_weights(len(GENERAL), 0.9)
    topic_ids = sorted(TOPICS)

    # (topic or None, grade) for every document: 13 per topic, the rest background.
    plan = []
    for t in topic_ids:
        plan += [(t, None)] * 13
    plan += [(None, None)] * (200 - len(plan))
    rng.shuffle(plan)

    docs, qrels = [], []
    for i, (topic, _) in enumerate(plan, start=1):
        docno = f"MINI-{i:04d}"
        length = rng.randint(80, 240)
        words = []
        if topic is not None:
            share = rng.uniform(0.10, 0.35)
            title = TOPICS[topic][0].split()
            vocab = TOPICS[topic][1].split()
            # Title words are rarer than the rest of the topic vocabulary; some relevant
            # documents never use them, which is what feedback is meant to recover.
            uses_title = rng.random() < 0.7
            topic_w = [0.0 if (w in title and not uses_title) else (0.5 if w in title else 1.0) for w in vocab]
            grade = 2 if share > 0.22 else 1
            qrels.append((topic, docno, grade))
        else:
            share = 0.0
        # One stray topical word (a distractor) in many documents.
        stray_topic = rng.choice(topic_ids)
        stray = rng.choice(TOPICS[stray_topic][1].split()[:2])
        for _ in range(length):
            r = rng.random()
            if r < share:
                words.append(rng.choices(vocab, topic_w)[0])
            elif r < share + 0.25:
                words.append(rng.choice(STOPWORDS))
            elif r < share + 0.27:
                words.append(stray)
            else:
                words.append(rng.choices(GENERAL, general_w)[0])
        if topic is None and rng.random() < 0.5:
            qrels.append((stray_topic, docno, 0))
        headline = " ".join(rng.choices(GENERAL, general_w, k=4)).capitalize()
        body = []
        for j in range(0, len(words), 12):
            sentence = " ".join(words[j:j + 12])
            body.append(sentence[0].upper() + sentence[1:] + ".")
        docs.append(f"<DOC>\n<DOCNO> {docno} </DOCNO>\n<HEADLINE>\n{headline}\n</HEADLINE>\n<TEXT>\n"
                    + "\n".join(body) + "\n</TEXT>\n</DOC>\n")

    (out / "documents.trec").write_text("".join(docs))
    topics = []
    for t in topic_ids:
        title, vocab = TOPICS[t]
        topics.append(f"<top>\n<num> Number: {t}\n<title> {title}\n\n<desc> Description:\n"
                      f"Documents about {title}.\n\n<narr> Narrative:\nA relevant document discusses "
                      f"{', '.join(vocab.split()[2:5])}.\n</top>\n\n")
    (out / "topics.txt").write_text("".join(topics))
    qrels.sort(key=lambda q: (q[0], q[1]))
    (out / "qrels.txt").write_text("".join(f"{t} 0 {d} {g}\n" for t, d, g in qrels))


if __name__ == "__main__":
    main()
