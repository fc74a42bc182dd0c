# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Line-by-line transliteration of _kernel_py.run_kernel. Every floating
point operation happens in the same order on the same IEEE-754 doubles,
so both kernels produce bit-identical stats. Keep the two files in sync.
"""

from libc.math cimport floor

import numpy as np


def run_kernel(
    deltas_arr,
    kinds_arr,
    addrs_arr,
    long long n,
    int line_shift,
    lv_sets_in,
    lv_ways_in,
    lv_lat_in,
    double cyc_ns,
    double ghz,
    int window,
    double remote_const_ns,
    long long mm_channels,
    long long mm_banks,
    long long mm_lines_per_row,
    double mm_t_hit,
    double mm_t_empty,
    double mm_t_conf,
    double mm_tras,
    double mm_trp,
    int dc_enabled,
    long long dc_sets,
    long long dc_ways,
    int dc_page_shift,
    long long dc_channels,
    long long dc_banks,
    long long dc_lines_per_row,
    double dc_t_hit,
    double dc_t_empty,
    double dc_t_conf,
    double dc_tras,
    double dc_trp,
):
    cdef long long[::1] deltas = deltas_arr
    cdef unsigned char[::1] kinds = kinds_arr
    cdef unsigned long long[::1] addrs = addrs_arr

    cdef long long lv_sets[3]
    cdef long long lv_ways[3]
    cdef double lv_lat[3]
    cdef long long lv_off[3]
    cdef long long total_slots = 0
    cdef int lv
    for lv in range(3):
        lv_sets[lv] = lv_sets_in[lv]
        lv_ways[lv] = lv_ways_in[lv]
        lv_lat[lv] = lv_lat_in[lv]
        lv_off[lv] = total_slots
        total_slots += lv_sets[lv] * lv_ways[lv]
    tags_arr = np.full(total_slots, -1, dtype=np.int64)
    dirty_arr = np.zeros(total_slots, dtype=np.uint8)
    cdef long long[::1] tags = tags_arr
    cdef unsigned char[::1] dirty = dirty_arr

    cdef long long mm_nb = mm_channels * mm_banks
    mm_row_arr = np.full(mm_nb, -1, dtype=np.int64)
    mm_clock_arr = np.zeros(mm_nb, dtype=np.float64)
    mm_act_arr = np.zeros(mm_nb, dtype=np.float64)
    cdef long long[::1] mm_row = mm_row_arr
    cdef double[::1] mm_clock = mm_clock_arr
    cdef double[::1] mm_act = mm_act_arr

    cdef long long dc_slots = dc_sets * dc_ways if dc_enabled else 0
    dc_tags_arr = np.full(dc_slots if dc_slots else 1, -1, dtype=np.int64)
    dc_cnt_arr = np.zeros(dc_slots if dc_slots else 1, dtype=np.int64)
    dc_dirty_arr = np.zeros(dc_slots if dc_slots else 1, dtype=np.uint8)
    cdef long long[::1] dc_tags = dc_tags_arr
    cdef long long[::1] dc_cnt = dc_cnt_arr
    cdef unsigned char[::1] dc_dirty = dc_dirty_arr
    cdef long long dc_nb = dc_channels * dc_banks if dc_enabled else 1
    dcb_row_arr = np.full(dc_nb, -1, dtype=np.int64)
    dcb_clock_arr = np.zeros(dc_nb, dtype=np.float64)
    dcb_act_arr = np.zeros(dc_nb, dtype=np.float64)
    cdef long long[::1] dcb_row = dcb_row_arr
    cdef double[::1] dcb_clock = dcb_clock_arr
    cdef double[::1] dcb_act = dcb_act_arr
    shadow = {}

    comp_arr = np.zeros(window, dtype=np.float64)
    cdef double[::1] comp = comp_arr
    cdef int w_count = 0
    cdef int w_head = 0
    cdef int tail

    cdef double clock_ns = 0.0
    cdef long long instructions = 0
    cdef long long reads = 0
    cdef long long writes = 0
    cdef long long hits[3]
    cdef long long misses[3]
    for lv in range(3):
        hits[lv] = 0
        misses[lv] = 0
    cdef long long dch = 0
    cdef long long dcm = 0
    cdef long long dcwb = 0
    cdef long long dirty_ev = 0
    cdef double amat_sum = 0.0

    cdef long long i, delta, line, page, cnt, vcnt
    cdef long long sets, ways, base, dbase, last
    cdef long long idx, lc, bidx, row
    cdef long long found, dfound, vic, empty, w, j
    cdef int is_write, hit_lv, serviced
    cdef unsigned char d
    cdef double lat, extra_ns, dt, ps, old

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
        line = <long long>(addrs[i] >> line_shift)

        hit_lv = -1
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
                page = <long long>(addrs[i] >> dc_page_shift)
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

    cdef long long total_cycles = <long long>floor(clock_ns * ghz + 0.5)
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
