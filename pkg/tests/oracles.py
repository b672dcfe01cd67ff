"""Independent brute-force oracles.

These re-apply the selection/counting rules literally, with plain loops
and no shared code with the package, so the implementations can be
checked against them exactly.
"""

from math import ceil


def oracle_min_support(n_videos: int) -> int:
    value = ceil(0.05 * n_videos)
    if value < 2:
        value = 2
    return value


def oracle_identify(assignments: dict, min_support: int | None = None) -> list[tuple]:
    """Approach selection by literal enumeration.

    Returns [(kind, sequence, support, supporting_ids), ...] in
    STANDARD/SIMPLE/COMPLEX order.
    """
    sequences = {}
    for vid in assignments:
        seq = tuple(assignments[vid])
        if len(seq) > 0:
            sequences[vid] = seq
    if not sequences:
        raise ValueError("no non-empty sequences")
    if min_support is None:
        min_support = oracle_min_support(len(sequences))

    # enumerate every distinct canonical sequence with its supporters
    distinct = []
    for vid in sorted(sequences):
        if sequences[vid] not in distinct:
            distinct.append(sequences[vid])
    supporters = {}
    for seq in distinct:
        vids = []
        for vid in sequences:
            if sequences[vid] == seq:
                vids.append(vid)
        supporters[seq] = sorted(vids)

    # --- standard: modal exact sequence, ties shorter then lexicographic
    best = None
    for seq in distinct:
        if best is None:
            best = seq
            continue
        if len(supporters[seq]) > len(supporters[best]):
            best = seq
        elif len(supporters[seq]) == len(supporters[best]):
            if (len(seq), seq) < (len(best), best):
                best = seq

    if len(supporters[best]) > 1:
        standard = (best, len(supporters[best]), supporters[best])
    else:
        # fallback: composite of majority steps ordered by mean normalized
        # occurrence midpoint; supported by videos containing all of them
        counts = {}
        for vid in sequences:
            seen = []
            for step in sequences[vid]:
                if step not in seen:
                    seen.append(step)
            for step in seen:
                counts[step] = counts.get(step, 0) + 1
        majority = []
        for step in counts:
            if counts[step] > len(sequences) / 2:
                majority.append(step)
        mids = {}
        for step in majority:
            values = []
            for vid in sequences:
                seq = sequences[vid]
                for i in range(len(seq)):
                    if seq[i] == step:
                        values.append((i + 0.5) / len(seq))
            mids[step] = sum(values) / len(values)
        composite = tuple(sorted(majority, key=lambda s: (mids[s], s)))
        containing = []
        for vid in sequences:
            ok = True
            for step in composite:
                if step not in sequences[vid]:
                    ok = False
            if ok:
                containing.append(vid)
        containing.sort()
        if len(composite) > 0 and len(containing) > 0:
            standard = (composite, len(containing), containing)
        else:
            fallback = None
            for seq in distinct:
                if fallback is None or (len(seq), seq) < (len(fallback), fallback):
                    fallback = seq
            standard = (fallback, 1, supporters[fallback])

    std_seq = standard[0]
    result = [("STANDARD",) + standard]

    # --- simple: fewest steps among qualifying distinct sequences
    simple = None
    for seq in distinct:
        if len(supporters[seq]) < min_support:
            continue
        if seq == std_seq or len(seq) > len(std_seq):
            continue
        if simple is None or (len(seq), seq) < (len(simple), simple):
            simple = seq
    if simple is not None:
        result.append(("SIMPLE", simple, len(supporters[simple]), supporters[simple]))

    # --- complex: most steps among qualifying distinct sequences
    complex_seq = None
    for seq in distinct:
        if len(supporters[seq]) < min_support:
            continue
        if seq == std_seq or len(seq) < len(std_seq):
            continue
        if simple is not None and seq == simple:
            continue
        if complex_seq is None or (-len(seq), seq) < (-len(complex_seq), complex_seq):
            complex_seq = seq
    if complex_seq is not None:
        result.append(
            ("COMPLEX", complex_seq, len(supporters[complex_seq]), supporters[complex_seq])
        )
    return result


def oracle_recount(raw_sets: list[tuple[str, list[str], list[str]]], supporting: set[str]):
    """Requirement recount from raw (video_id, ingredients, tools) triples.

    Applies the same fold rules by brute force: lowercase/trim, strip one
    trailing 's' (len > 3, not 'ss'), count distinct videos per folded key.
    """

    def norm(name):
        return " ".join(name.lower().split())

    def fold(name):
        name = norm(name)
        if name.endswith("s") and not name.endswith("ss") and len(name) > 3:
            return name[:-1]
        return name

    counts = {}
    for vid, ingredients, tools in raw_sets:
        if vid not in supporting:
            continue
        for kind, values in (("INGREDIENT", ingredients), ("TOOL", tools)):
            seen = []
            for value in values:
                key = (fold(value), kind)
                if key not in seen:
                    seen.append(key)
            for key in seen:
                counts[key] = counts.get(key, 0) + 1
    return counts


def approaches_to_tuples(approaches) -> list[tuple]:
    """Impl output -> the oracle's comparison shape."""
    return [
        (
            a.kind.value,
            tuple(a.sequence.steps),
            a.sequence.support,
            sorted(a.supporting_video_ids),
        )
        for a in approaches
    ]
