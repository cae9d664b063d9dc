# Copyright 2026 The melodevo Authors
# SPDX-License-Identifier: Apache-2.0

"""Parses every fixture SMF with mido and checks it against the events that
were written, with exact absolute ticks."""

import json
import pathlib
import sys

import mido

RPN_CONTROLLERS = {0x65, 0x64, 0x06, 0x26}


def decode(msg):
    if msg.type == "note_on":
        return ["note_on", msg.note, msg.velocity]
    if msg.type == "note_off":
        return ["note_off", msg.note, msg.velocity]
    if msg.type == "aftertouch":
        return ["channel_pressure", msg.value, 0]
    if msg.type == "pitchwheel":
        return ["pitch_bend", msg.pitch + 8192, 0]
    if msg.type == "control_change":
        return ["control_change", msg.control, msg.value]
    raise ValueError(f"unexpected message {msg}")


def check(mid_path):
    expected = json.loads(mid_path.with_suffix(".json").read_text())
    mid = mido.MidiFile(mid_path, clip=False)
    assert mid.type == 0, "not format 0"
    assert len(mid.tracks) == 1, "expected one track"
    assert mid.ticks_per_beat == expected["tpqn"], "division mismatch"

    tick = 0
    got = []
    tempo = None
    end_tick = None
    for msg in mid.tracks[0]:
        tick += msg.time
        if msg.is_meta:
            if msg.type == "set_tempo":
                tempo = msg.tempo
            elif msg.type == "end_of_track":
                end_tick = tick
            continue
        assert msg.channel == expected["channel"], "channel mismatch"
        got.append([tick] + decode(msg))

    assert tempo == int(60_000_000 / expected["bpm"] + 0.5), f"tempo {tempo}"
    if any(e[0] == "pitch_bend" for e in expected["events"]):
        setup = got[:6]
        assert [g[2] for g in setup] == [0x65, 0x64, 0x06, 0x26, 0x65, 0x64], "missing bend range setup"
        assert all(g[0] == 0 for g in setup)
        got = got[6:]
    want = [[e[1], e[0], e[2], e[3]] for e in expected["events"]]
    assert got == want, f"events differ at {next(i for i, (a, b) in enumerate(zip(got, want)) if a != b)}"
    assert end_tick == (want[-1][0] if want else 0), "end of track tick"


def main():
    root = pathlib.Path(sys.argv[1])
    files = sorted(root.glob("smf_*.mid"))
    assert files, "no fixtures"
    for f in files:
        try:
            check(f)
        except AssertionError as e:
            print(f"{f.name}: {e}")
            return 1
    extra = [pathlib.Path(p) for p in sys.argv[2:]]
    for p in extra:
        mid = mido.MidiFile(p)
        assert mid.type == 0 and len(mid.tracks) == 1, p
    print(f"{len(files)} fixtures and {len(extra)} exports parsed by mido")
    return 0


if __name__ == "__main__":
    sys.exit(main())
