"""Pure-Python simulation kernel.

Reference implementation. The compiled kernel in _kernel_cy.pyx is a
line-by-line transliteration of this loop; every floating-point operation
happens in the same order so both produce bit-identical results. Keep the
two files in sync when touching either.

Cost model:
  - non-memory instructions advance the clock by one core cycle each,
    batched through the per-record delta field;
  - cache hits are pipelined and cost no wall time (their latency is
    still charged to the AMAT statistic for reads);
  - an L3 read miss occupies a slot in the outstanding-miss window; the
    clock stalls to the oldest completion when the window is full and
    drains fully at the end of the trace;
  - writes allocate and update state at every level but are posted:
    they never charge wall time and never enter the window.
"""

from __future__ import annotations

from math import floor


def run_kernel(
    deltas,
    kinds,
    addrs,
    n,
    line_shift,
    lv_sets,
    lv_ways,
    lv_lat,
    cyc_ns,
    ghz,
    window,
    remote_const_ns,
    mm_channels,
    mm_banks,
    mm_lines_per_row,
    mm_t_hit,
    mm_t_empty,
    mm_t_conf,
    mm_tras,
    mm_trp,
    dc_enabled,
    dc_sets,
    dc_ways,
    dc_page_shift,
    dc_channels,
    dc_banks,
    dc_lines_per_row,
    dc_t_hit,
    dc_t_empty,
    dc_t_conf,
    dc_tras,
    dc_trp,
):
    lv_off = [0, 0, 0]
    total_slots = 0
    for lv in range(3):
        lv_off[lv] = total_slots
        total_slots += lv_sets[lv] * lv_ways[lv]
    tags = [-1] * total_slots
    dirty = [0] * total_slots

    mm_nb = mm_channels * mm_banks
    mm_row = [-1] * mm_nb
    mm_clock = [0.0] * mm_nb
    mm_act = [0.0] * mm_nb

    dc_slots = dc_sets * dc_ways if dc_enabled else 0
    dc_tags = [-1] * dc_slots
    dc_cnt = [0] * dc_slots
    dc_dirty = [0] * dc_slots
    dc_nb = dc_channels * dc_banks if dc_enabled else 0
    dcb_row = [-1] * dc_nb
    dcb_clock = [0.0] * dc_nb
    dcb_act = [0.0] * dc_nb
    shadow = {}

    comp = [0.0] * window
    w_count = 0
    w_head = 0

    clock_ns = 0.0
    instructions = 0
    reads = 0
    writes = 0
    hits = [0, 0, 0]
    misses = [0, 0, 0]
    dch = 0
    dcm = 0
    dcwb = 0
    dirty_ev = 0
    amat_sum = 0.0

    for i in range(n):
        delta = deltas[i]
        if delta:
            instructions += delta
            clock_ns = clock_ns + delta * cyc_ns
        is_write = kinds[i]
        if is_write:
            writes += 1
        else:
            reads += 1
        line = addrs[i] >> line_shift

        hit_lv = -1
        hit_dirty = 0
        for lv in range(3):
            sets = lv_sets[lv]
            ways = lv_ways[lv]
            base = lv_off[lv] + (line % sets) * ways
            found = -1
            for w in range(ways):
                if tags[base + w] == line:
                    found = w
                    break
            if found >= 0:
                d = dirty[base + found]
                j = found
                while j > 0:
                    tags[base + j] = tags[base + j - 1]
                    dirty[base + j] = dirty[base + j - 1]
                    j -= 1
                tags[base] = line
                dirty[base] = d
                hit_lv = lv
                hit_dirty = d
                break

        if hit_lv == 0:
            hits[0] += 1
            if is_write:
                base = lv_off[0] + (line % lv_sets[0]) * lv_ways[0]
                dirty[base] = 1
            else:
                amat_sum = amat_sum + lv_lat[0]
            continue

        lat = 0.0
        if hit_lv > 0:
            hits[hit_lv] += 1
            for lv in range(hit_lv):
                misses[lv] += 1
            if not is_write:
                lat = lv_lat[hit_lv]
        else:
            misses[0] += 1
            misses[1] += 1
            misses[2] += 1
            extra_ns = 0.0
            serviced = 0
            if dc_enabled:
                page = addrs[i] >> dc_page_shift
                dbase = (page % dc_sets) * dc_ways
                dfound = -1
                for w in range(dc_ways):
                    if dc_tags[dbase + w] == page:
                        dfound = w
                        break
                if dfound >= 0:
                    dch += 1
                    dc_cnt[dbase + dfound] += 1
                    if is_write:
                        dc_dirty[dbase + dfound] = 1
                    idx = line % dc_channels
                    lc = line // dc_channels
                    bidx = idx * dc_banks + (lc // dc_lines_per_row) % dc_banks
                    row = lc // (dc_lines_per_row * dc_banks)
                    if dcb_row[bidx] == row:
                        dt = dc_t_hit
                    elif dcb_row[bidx] == -1:
                        dcb_act[bidx] = dcb_clock[bidx]
                        dcb_row[bidx] = row
                        dt = dc_t_empty
                    else:
                        ps = dcb_act[bidx] + dc_tras
                        if dcb_clock[bidx] > ps:
                            ps = dcb_clock[bidx]
                        dcb_act[bidx] = ps + dc_trp
                        dcb_row[bidx] = row
                        dt = (ps - dcb_clock[bidx]) + dc_t_conf
                    dcb_clock[bidx] = dcb_clock[bidx] + dt
                    lat = dt
                    serviced = 1
                else:
                    dcm += 1
                    cnt = shadow.get(page, 0) + 1
                    shadow[page] = cnt
                    vic = 0
                    empty = -1
                    for w in range(dc_ways):
                        if dc_tags[dbase + w] == -1:
                            empty = w
                            break
                        if dc_cnt[dbase + w] < dc_cnt[dbase + vic]:
                            vic = w
                    if empty >= 0:
                        dc_tags[dbase + empty] = page
                        dc_cnt[dbase + empty] = cnt
                        dc_dirty[dbase + empty] = 1 if is_write else 0
                        del shadow[page]
                    elif cnt > dc_cnt[dbase + vic]:
                        if dc_dirty[dbase + vic]:
                            dcwb += 1
                            extra_ns = remote_const_ns
                        shadow[dc_tags[dbase + vic]] = dc_cnt[dbase + vic]
                        dc_tags[dbase + vic] = page
                        dc_cnt[dbase + vic] = cnt
                        dc_dirty[dbase + vic] = 1 if is_write else 0
                        del shadow[page]
            if not serviced:
                idx = line % mm_channels
                lc = line // mm_channels
                bidx = idx * mm_banks + (lc // mm_lines_per_row) % mm_banks
                row = lc // (mm_lines_per_row * mm_banks)
                if mm_row[bidx] == row:
                    dt = mm_t_hit
                elif mm_row[bidx] == -1:
                    mm_act[bidx] = mm_clock[bidx]
                    mm_row[bidx] = row
                    dt = mm_t_empty
                else:
                    ps = mm_act[bidx] + mm_tras
                    if mm_clock[bidx] > ps:
                        ps = mm_clock[bidx]
                    mm_act[bidx] = ps + mm_trp
                    mm_row[bidx] = row
                    dt = (ps - mm_clock[bidx]) + mm_t_conf
                mm_clock[bidx] = mm_clock[bidx] + dt
                lat = remote_const_ns + dt
            lat = lat + extra_ns
            if not is_write:
                if w_count == window:
                    old = comp[w_head]
                    if old > clock_ns:
                        clock_ns = old
                    w_head = (w_head + 1) % window
                    w_count -= 1
                tail = (w_head + w_count) % window
                comp[tail] = clock_ns + lat
                w_count += 1

        if not is_write:
            if hit_lv != 0:
                amat_sum = amat_sum + lat

        for lv in range(hit_lv if hit_lv >= 0 else 3):
            sets = lv_sets[lv]
            ways = lv_ways[lv]
            base = lv_off[lv] + (line % sets) * ways
            last = base + ways - 1
            if tags[last] != -1 and dirty[last]:
                dirty_ev += 1
            j = ways - 1
            while j > 0:
                tags[base + j] = tags[base + j - 1]
                dirty[base + j] = dirty[base + j - 1]
                j -= 1
            tags[base] = line
            if lv == 0:
                dirty[base] = 1 if is_write else 0
            else:
                dirty[base] = 0

    while w_count > 0:
        old = comp[w_head]
        if old > clock_ns:
            clock_ns = old
        w_head = (w_head + 1) % window
        w_count -= 1

    total_cycles = int(floor(clock_ns * ghz + 0.5))
    return (
        instructions + n,
        reads,
        writes,
        hits[0],
        misses[0],
        hits[1],
        misses[1],
        hits[2],
        misses[2],
        dch,
        dcm,
        dcwb,
        dirty_ev,
        amat_sum,
        clock_ns,
        total_cycles,
    )
