#!/usr/bin/env python3
"""Regenerates the frozen test fixtures under tests/fixtures/.

Every expectation here is computed from the documented pipeline rules,
independently of the C++ sources. The comment table is hand-authored: each row
carries the expected cleaned text and its hand-counted token count, and the
script refuses to write anything if a hand count disagrees with a recount.

Run from the repository root:  python3 tools/dev/make_fixtures.py
"""

import csv
import io
import json
import os
import random

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..")
FIXTURES = os.path.normpath(os.path.join(ROOT, "tests", "fixtures"))

ASCII_SPACE = " \t\n\r\f\v"

LEVELS = ["Knowledge", "Comprehension", "Application", "Analysis", "Evaluation", "Synthesis"]

# ---------------------------------------------------------------------------
# rule mirrors (from the documented contracts, not from the C++ sources)


def segment_sentences(text):
    sentences = []
    start = 0
    i = 0
    while i < len(text):
        if text[i] in ".!?":
            if i + 1 < len(text) and text[i + 1] not in ASCII_SPACE:
                i += 1
                continue
            piece = text[start : i + 1].strip(ASCII_SPACE)
            if piece:
                sentences.append(piece)
            start = i + 1
        i += 1
    tail = text[start:].strip(ASCII_SPACE)
    if tail:
        sentences.append(tail)
    return sentences


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data.encode("utf-8"):
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def question_id(comment_id, sentence_index):
    return "q%016x" % fnv1a64("%s#%d" % (comment_id, sentence_index))


def n_tokens(text):
    return len(text.split())


# ---------------------------------------------------------------------------
# fixture corpus: 6 videos, 60 comments

VIDEOS = [
    # video_id, subject, title, views, likes, transcript
    ("vbio01", "biology", "Cell membranes", 12000, 340,
     "the cell membrane controls what enters and leaves the cell"),
    ("vbio02", "biology", "Osmosis basics", 0, 0,
     "backup lecture on osmosis basics"),
    ("vchem01", "chemistry", "Balancing equations", 5000, 120,
     "today we balance chemical equations step by step"),
    ("vmath01", "mathematics", "Derivatives", 8000, 210,
     "the derivative measures the rate of change"),
    ("vphys01", "physics", "Newton's laws", 100000, 2500,
     "newton laws describe how forces move objects"),
    ("vcs01", "computer_science", "Sorting algorithms", 60000, 1800,
     "sorting algorithms differ in time complexity"),
]

LONG_50Q = "why does " + " ".join("t%02d" % i for i in range(1, 48)) + " happen?"
LONG_51Q = "why does " + " ".join("t%02d" % i for i in range(1, 49)) + " happen?"
WALL_512 = " ".join("word%03d" % i for i in range(1, 513))
WALL_513 = " ".join("word%03d" % i for i in range(1, 514))

# comment_id, video_id, likes, replies, raw_text, expected clean_text, hand token count
COMMENTS = [
    ("cb01", "vbio01", 4, 1,
     "Check the notes at https://notes.example.com/bio before class why does osmosis happen?",
     "Check the notes at before class why does osmosis happen?", 10),
    ("cb02", "vbio01", 2, 0,
     "@ProfSmith can you explain diffusion again?",
     "can you explain diffusion again?", 5),
    ("cb03", "vbio01", 9, 2,
     "Great video \U0001F600\U0001F600 loved it!",
     "Great video loved it!", 4),
    ("cb04", "vbio01", 1, 0,
     "\U0001F525What is entropy?",
     "What is entropy?", 3),
    ("cb05", "vbio01", 0, 0, "thanks!", "thanks!", 1),
    ("cb06", "vbio01", 0, 0, "great video", "great video", 2),
    ("cb07", "vbio01", 3, 1, "this helped me", "this helped me", 3),
    ("cb08", "vbio01", 7, 3,
     "What is DNA? How does it replicate? Thanks a lot.",
     "What is DNA? How does it replicate? Thanks a lot.", 10),
    ("cb09", "vbio01", 1, 0,
     "Why me? I never understand this topic.",
     "Why me? I never understand this topic.", 7),
    ("cb10", "vbio01", 2, 1,
     "I wonder... is this right?",
     "I wonder... is this right?", 5),
    ("cb11", "vbio01", 5, 2,
     "Why does ATP matter so much here?",
     "Why does ATP matter so much here?", 7),
    ("cb12", "vbio01", 0, 0,
     "filler past the cap",
     "filler past the cap", 4),

    ("cz01", "vbio02", 1, 0,
     "Why does my cell model collapse?",
     "Why does my cell model collapse?", 6),
    ("cz02", "vbio02", 0, 0, "nice", "nice", 1),
    ("cz03", "vbio02", 2, 1,
     "see www.example.com for details ok?",
     "see for details ok?", 4),

    ("cc01", "vchem01", 3, 0,
     "How is that possible?! Amazing.",
     "How is that possible?! Amazing.", 5),
    ("cc02", "vchem01", 5, 2,
     "Can you balance H2O2 decomposition for us?",
     "Can you balance H2O2 decomposition for us?", 7),
    ("cc03", "vchem01", 0, 0,
     "WWW.EXAMPLE.COM is down",
     "is down", 2),
    ("cc04", "vchem01", 1, 0,
     "readhttp://chem.example this carefully now",
     "read this carefully now", 4),
    ("cc05", "vchem01", 2, 1,
     "why    does\tthis\nreaction work?",
     "why does this reaction work?", 5),
    ("cc06", "vchem01", 0, 0,
     "https://spam.example \U0001F600",
     "", 0),
    ("cc07", "vchem01", 4, 1,
     "What is photosynthesis\U0001F331 exactly?",
     "What is photosynthesis exactly?", 4),
    ("cc08", "vchem01", 2, 0,
     "I measured the pH today. It was seven.",
     "I measured the pH today. It was seven.", 8),
    ("cc09", "vchem01", 1, 1, LONG_50Q, LONG_50Q, 50),
    ("cc10", "vchem01", 1, 0, LONG_51Q, LONG_51Q, 51),

    ("cm01", "vmath01", 6, 2,
     "How do I derive the chain rule?",
     "How do I derive the chain rule?", 7),
    ("cm02", "vmath01", 3, 1,
     "Define the term limit please?",
     "Define the term limit please?", 5),
    ("cm03", "vmath01", 1, 0,
     "@tutor @helper thanks so much",
     "thanks so much", 3),
    ("cm04", "vmath01", 0, 0,
     "Проверка unicode?",
     "Проверка unicode?", 2),
    ("cm05", "vmath01", 4, 1,
     "Is zero a natural number? Asking for my proof.",
     "Is zero a natural number? Asking for my proof.", 9),
    ("cm06", "vmath01", 0, 0, WALL_513, WALL_513, 513),
    ("cm07", "vmath01", 2, 0, WALL_512, WALL_512, 512),
    ("cm08", "vmath01", 0, 0, "Why?", "Why?", 1),
    ("cm09", "vmath01", 5, 2,
     "Could you explain convergence one more time?",
     "Could you explain convergence one more time?", 7),
    ("cm10", "vmath01", 1, 0,
     "The integral sign looks like an S.",
     "The integral sign looks like an S.", 7),

    ("cp01", "vphys01", 8, 3,
     "Why does the apple fall?",
     "Why does the apple fall?", 5),
    ("cp02", "vphys01", 2, 0,
     "Newton was brilliant!",
     "Newton was brilliant!", 3),
    ("cp03", "vphys01", 6, 2,
     "What is terminal velocity? And why does it exist?",
     "What is terminal velocity? And why does it exist?", 9),
    ("cp04", "vphys01", 3, 1,
     "F=ma explains everything right?",
     "F=ma explains everything right?", 4),
    ("cp05", "vphys01", 0, 0,
     "\U0001F680\U0001F680\U0001F680",
     "", 0),
    ("cp06", "vphys01", 1, 0,
     "check https://phys.example/notes and http://mirror.example/notes too",
     "check and too", 3),
    ("cp07", "vphys01", 4, 2,
     "How fast is light in water?",
     "How fast is light in water?", 6),
    ("cp08", "vphys01", 0, 0, "so cool", "so cool", 2),
    ("cp09", "vphys01", 2, 1,
     "Energy cannot be created or destroyed. True?",
     "Energy cannot be created or destroyed. True?", 7),
    ("cp10", "vphys01", 5, 1,
     "Does mass increase near light speed?",
     "Does mass increase near light speed?", 6),

    ("cs01", "vcs01", 7, 2,
     "What is Big O notation?",
     "What is Big O notation?", 5),
    ("cs02", "vcs01", 3, 0,
     "My code finally compiles \U0001F389\U0001F389",
     "My code finally compiles", 4),
    ("cs03", "vcs01", 5, 1,
     "How does merge sort split the array?",
     "How does merge sort split the array?", 7),
    ("cs04", "vcs01", 0, 0,
     "@dev123 nice stream",
     "nice stream", 2),
    ("cs05", "vcs01", 6, 2,
     "Why is my recursion so slow?",
     "Why is my recursion so slow?", 6),
    ("cs06", "vcs01", 0, 0, "segfault again", "segfault again", 2),
    ("cs07", "vcs01", 4, 1,
     "Can hash collisions break the map? Sometimes they do.",
     "Can hash collisions break the map? Sometimes they do.", 9),
    ("cs08", "vcs01", 2, 0,
     "Is P equal to NP?",
     "Is P equal to NP?", 5),
    ("cs09", "vcs01", 1, 0,
     "loving this series so far",
     "loving this series so far", 5),
    ("cs10", "vcs01", 3, 1,
     "Where does the stack live in memory?",
     "Where does the stack live in memory?", 7),
    ("cs11", "vcs01", 9, 4,
     "Why is quicksort fast?",
     "Why is quicksort fast?", 4),
    ("cs12", "vcs01", 2, 1,
     "What about bubble sort?",
     "What about bubble sort?", 4),
    ("cs13", "vcs01", 0, 0, "ok", "ok", 1),
    ("cs14", "vcs01", 1, 0,
     "Does caching help here?",
     "Does caching help here?", 4),
    ("cs15", "vcs01", 0, 0,
     "thanks for everything",
     "thanks for everything", 3),
]

CAP = 10
COMMENT_MIN, COMMENT_MAX = 3, 512
QUESTION_MIN, QUESTION_MAX = 3, 50
THRESHOLD = 0.5
RULE_P_YES, RULE_P_NO = 0.99, 0.01


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")) + "\n")


def build_corpus():
    os.makedirs(os.path.join(FIXTURES, "corpus"), exist_ok=True)
    os.makedirs(os.path.join(FIXTURES, "expected"), exist_ok=True)

    ranks = {}
    comment_rows = []
    for cid, vid, likes, replies, raw, clean, count in COMMENTS:
        assert n_tokens(clean) == count, "hand count wrong for %s: %d" % (cid, n_tokens(clean))
        ranks[vid] = ranks.get(vid, 0) + 1
        comment_rows.append({
            "comment_id": cid, "video_id": vid, "raw_text": raw, "clean_text": "",
            "like_count": likes, "reply_count": replies, "retrieval_rank": ranks[vid],
        })

    video_rows = []
    for vid, subject, title, views, likes, transcript in VIDEOS:
        video_rows.append({
            "video_id": vid, "subject": subject, "title": title,
            "description": "%s lecture" % subject, "view_count": views, "like_count": likes,
            "transcript": transcript,
            "comment_ids": [c["comment_id"] for c in comment_rows if c["video_id"] == vid],
        })

    write_jsonl(os.path.join(FIXTURES, "corpus", "videos.jsonl"), video_rows)
    write_jsonl(os.path.join(FIXTURES, "corpus", "comments.jsonl"), comment_rows)

    # expected cleaned text for every comment
    clean_by_id = {cid: clean for cid, _, _, _, _, clean, _ in COMMENTS}
    with open(os.path.join(FIXTURES, "expected", "clean.json"), "w", encoding="utf-8") as f:
        json.dump(clean_by_id, f, ensure_ascii=False, indent=1, sort_keys=True)

    # survivors: per-video cap first, then the token-count filter
    capped = [row for row in comment_rows if row["retrieval_rank"] <= CAP]
    kept = [row["comment_id"] for row in capped
            if COMMENT_MIN <= n_tokens(clean_by_id[row["comment_id"]]) <= COMMENT_MAX]
    with open(os.path.join(FIXTURES, "expected", "kept_cap10.json"), "w") as f:
        json.dump(kept, f, indent=1)

    # questions under the ends-with-? rule detector
    subject_of = {v[0]: v[1] for v in VIDEOS}
    questions = []
    for row in capped:
        cid = row["comment_id"]
        if cid not in kept:
            continue
        for index, sentence in enumerate(segment_sentences(clean_by_id[cid])):
            prob = RULE_P_YES if sentence.endswith("?") else RULE_P_NO
            if prob < THRESHOLD:
                continue
            count = n_tokens(sentence)
            if count < QUESTION_MIN or count > QUESTION_MAX:
                continue
            questions.append({
                "question_id": question_id(cid, index), "comment_id": cid,
                "video_id": row["video_id"], "subject": subject_of[row["video_id"]],
                "text": sentence, "detection_prob": RULE_P_YES, "token_count": count,
            })
    with open(os.path.join(FIXTURES, "expected", "questions_rule.json"), "w",
              encoding="utf-8") as f:
        json.dump(questions, f, ensure_ascii=False, indent=1)

    # corpus statistics over the working corpus (kept comments + extracted questions)
    stats = []
    for subject in ["biology", "chemistry", "mathematics", "physics", "computer_science"]:
        vids = [v for v in VIDEOS if v[1] == subject]
        per_video_counts, per_video_means = [], []
        for vid, _, _, _, _, _ in vids:
            tokens = [n_tokens(clean_by_id[c]) for c in kept
                      if next(r["video_id"] for r in comment_rows if r["comment_id"] == c) == vid]
            per_video_counts.append(len(tokens))
            if tokens:
                per_video_means.append(sum(tokens) / len(tokens))
        n = len(vids)
        stats.append({
            "subject": subject,
            "n_videos": n,
            "avg_views": sum(v[3] for v in vids) / n,
            "avg_likes": sum(v[4] for v in vids) / n,
            "avg_comments": sum(per_video_counts) / n,
            "avg_transcript_tokens": sum(n_tokens(v[5]) for v in vids) / n,
            "avg_comment_tokens":
                sum(per_video_means) / len(per_video_means) if per_video_means else 0.0,
            "n_extracted_questions":
                sum(1 for q in questions if q["subject"] == subject),
        })
    with open(os.path.join(FIXTURES, "expected", "stats.json"), "w") as f:
        json.dump(stats, f, indent=1)


# ---------------------------------------------------------------------------
# labeled question datasets

TEMPLATES = {
    "Knowledge": "Define the term {} used in the lecture?",
    "Comprehension": "Can you explain {} in your own words?",
    "Application": "How do I apply {} to a new problem?",
    "Analysis": "How does {} compare with the alternative?",
    "Evaluation": "Which method is better for {} and why?",
    "Synthesis": "How would you design a study around {}?",
}

TOPICS = ["osmosis", "entropy", "limits", "gravity", "recursion", "bonding", "vectors",
          "enzymes", "momentum", "hashing"]


def build_bt60():
    os.makedirs(os.path.join(FIXTURES, "bt"), exist_ok=True)
    rows = []
    for level in LEVELS:
        for i in range(10):
            rows.append({
                "text": TEMPLATES[level].format(TOPICS[i % len(TOPICS)]),
                "label": level,
                "origin": "dasqbt",
            })
    write_jsonl(os.path.join(FIXTURES, "bt", "bt60.jsonl"), rows)


def build_questions200():
    subjects = ["biology", "chemistry", "mathematics", "physics", "computer_science"]
    rng = random.Random(31)
    rows = []
    for i in range(200):
        level = LEVELS[i % 6]
        topic = TOPICS[rng.randrange(len(TOPICS))]
        text = TEMPLATES[level].format(topic)
        rows.append({
            "question_id": "qf%04d" % i, "comment_id": "cf%04d" % i,
            "video_id": "vf%02d" % (i % 10), "subject": subjects[i % 5],
            "text": text, "detection_prob": 0.9, "token_count": n_tokens(text),
        })
    write_jsonl(os.path.join(FIXTURES, "bt", "questions200.jsonl"), rows)


def build_annotations():
    os.makedirs(os.path.join(FIXTURES, "annotations"), exist_ok=True)
    rng = random.Random(7)
    tie_ids = set(range(0, 300, 25))  # 12 planted three-way ties
    assert len(tie_ids) == 12
    rows = []
    gold = {}
    for q in range(300):
        qid = "hq%03d" % q
        if q in tie_ids:
            labels = rng.sample(LEVELS, 3)  # three distinct -> no majority
        else:
            a = rng.choice(LEVELS)
            if rng.random() < 0.5:
                labels = [a, a, a]
            else:
                b = rng.choice([lv for lv in LEVELS if lv != a])
                labels = [a, a, b]
                rng.shuffle(labels)
        for annotator, label in enumerate(labels):
            rows.append((qid, "ann%d" % annotator, label))
        # majority mirror: first pair that agrees wins
        if labels[0] == labels[1] or labels[0] == labels[2]:
            gold[qid] = labels[0]
        elif labels[1] == labels[2]:
            gold[qid] = labels[1]
    assert len(gold) == 288

    with open(os.path.join(FIXTURES, "annotations", "human300.csv"), "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["question_id", "annotator_id", "label"])
        writer.writerows(rows)
    with open(os.path.join(FIXTURES, "annotations", "expected.json"), "w") as f:
        json.dump({"gold_count": 288, "tie_count": 12, "gold": gold}, f, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# recorded video-API cache (offline replay for the harvester)


def sanitize(s):
    out = []
    for ch in s:
        if ch.isascii() and (ch.isalnum() or ch in "_."):
            out.append(ch)
        elif ch == "-":
            out.append("--")
        else:
            out.append("-%02x" % ord(ch))
    return "".join(out)


def cache_file(kind, ident):
    return os.path.join(FIXTURES, "video_cache", sanitize(kind) + "_" + sanitize(ident))


def put(kind, ident, body):
    path = cache_file(kind, ident)
    with open(path, "w", encoding="utf-8") as f:
        f.write(body)


def metadata_body(vid, title, views, likes):
    return json.dumps({
        "items": [{
            "id": vid,
            "snippet": {"title": title, "description": "recorded fixture"},
            "statistics": {"viewCount": str(views), "likeCount": str(likes)},
        }]
    })


def comments_body(items, next_token=None):
    body = {"items": items}
    if next_token:
        body["nextPageToken"] = next_token
    return json.dumps(body)


def comment_item(cid, text, likes, replies):
    return {
        "snippet": {
            "totalReplyCount": replies,
            "topLevelComment": {
                "id": cid,
                "snippet": {"textOriginal": text, "likeCount": str(likes)},
            },
        }
    }


def build_video_cache():
    os.makedirs(os.path.join(FIXTURES, "video_cache"), exist_ok=True)

    put("video", "cachedA", metadata_body("cachedA", "Recorded lecture A", 4200, 99))
    put("transcript", "cachedA",
        '<transcript><text start="0" dur="2">hello &amp; welcome</text>'
        '<text start="2" dur="2"> to the series </text></transcript>')
    put("comments", "cachedA#page1", comments_body(
        [comment_item("a1", "Why does this work?", 3, 1),
         comment_item("a2", "Great intro!", 1, 0)], next_token="tok2"))
    put("comments", "cachedA#page2", comments_body(
        [comment_item("a3", "What comes next?", 2, 0)]))

    # comments disabled: recorded error envelope replays as an empty list
    put("video", "cachedB", metadata_body("cachedB", "Recorded lecture B", 100, 5))
    put("transcript", "cachedB",
        '<transcript><text start="0" dur="3">solo segment</text></transcript>')
    put("comments", "cachedB#page1", json.dumps(
        {"error": {"errors": [{"reason": "commentsDisabled"}], "code": 403}}))


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    build_corpus()
    build_bt60()
    build_questions200()
    build_annotations()
    build_video_cache()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
