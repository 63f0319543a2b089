"""PCM clip handling, TTS glue, episode assembly, and WAV encoding.

Clips are float arrays in [-1, 1], shape (frames, channels). The mastered
episode is stereo 44100 Hz PCM16. Loudness follows the K-weighted
integrated measurement (two-stage pre-filter, 400 ms gated blocks);
ducking is a static gain on the music bed while speech plays.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import (
    EmptyClipList,
    EncoderUnavailable,
    RateMismatch,
    SynthesisRejected,
)

MASTER_RATE = 44100
ALLOWED_RATES = (22050, 24000, 44100, 48000)
PEAK_CEILING = 10.0 ** (-1.0 / 20.0)  # -1 dBFS
SILENCE_FLOOR_LUFS = -70.0


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray  # float, shape (frames, channels)
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate not in ALLOWED_RATES:
            raise ValueError(f"unsupported sample rate {self.sample_rate}")
        if self.samples.ndim != 2 or self.samples.shape[1] not in (1, 2):
            raise ValueError("samples must have shape (frames, 1 or 2)")

    @property
    def frames(self) -> int:
        return self.samples.shape[0]

    @property
    def channels(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.frames / self.sample_rate


@dataclass(frozen=True)
class MixSpec:
    bgm_clip: AudioClip
    inter_turn_gap: float = 0.4
    bgm_gain_db: float = -18.0
    intro_lead: float = 2.0
    outro_fade: float = 3.0
    loudness_target_lufs: float = -16.0

    def __post_init__(self):
        if self.inter_turn_gap < 0:
            raise ValueError("inter_turn_gap must be >= 0")
        if self.bgm_gain_db > 0:
            raise ValueError("bgm_gain_db must be <= 0")
        if self.outro_fade < 0:
            raise ValueError("outro_fade must be >= 0")


def frames_for(seconds: float, rate: int) -> int:
    return int(round(seconds * rate))


def silence(seconds: float, rate: int = MASTER_RATE, channels: int = 1) -> AudioClip:
    return AudioClip(np.zeros((frames_for(seconds, rate), channels), dtype=np.float32), rate)


def tone(seconds: float, freq: float, rate: int = MASTER_RATE,
         amplitude: float = 0.3, channels: int = 1) -> AudioClip:
    t = np.arange(frames_for(seconds, rate)) / rate
    wave = (amplitude * np.sin(2 * math.pi * freq * t)).astype(np.float32)
    return AudioClip(np.tile(wave[:, None], (1, channels)), rate)


def to_stereo(clip: AudioClip) -> AudioClip:
    if clip.channels == 2:
        return clip
    return AudioClip(np.repeat(clip.samples, 2, axis=1), clip.sample_rate)


def resample(clip: AudioClip, rate: int) -> AudioClip:
    """Linear-interpolation resample; identity when rates already match."""
    if clip.sample_rate == rate:
        return clip
    out_frames = frames_for(clip.duration, rate)
    src = np.linspace(0.0, clip.frames - 1, out_frames)
    cols = [np.interp(src, np.arange(clip.frames), clip.samples[:, c])
            for c in range(clip.channels)]
    return AudioClip(np.stack(cols, axis=1).astype(np.float32), rate)


# --- TTS glue -------------------------------------------------------------


def synthesize_turn(turn, cfg, tts, language: str = "en") -> AudioClip:
    """Synthesize one dialogue turn with the role's mapped voice, resampled
    to the master rate."""
    if not turn.text.strip():
        raise SynthesisRejected("empty turn text")
    voice_id = cfg.voice_map[turn.speaker]
    clip = tts.synthesize(turn.text, voice_id, language)
    return resample(clip, MASTER_RATE)


# --- loudness (K-weighted, gated) -----------------------------------------


def _k_weighting_coeffs(rate: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # stage 1: high shelf (+4 dB above ~1.7 kHz); stage 2: RLB high-pass
    f0, gain_db, q = 1681.974450955533, 3.999843853973347, 0.7071752369554196
    k = math.tan(math.pi * f0 / rate)
    vh = 10.0 ** (gain_db / 20.0)
    vb = vh ** 0.4996667741545416
    a0 = 1.0 + k / q + k * k
    shelf_b = np.array([
        (vh + vb * k / q + k * k) / a0,
        2.0 * (k * k - vh) / a0,
        (vh - vb * k / q + k * k) / a0,
    ])
    shelf_a = np.array([1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0])

    f0, q = 38.13547087602444, 0.5003270373238773
    k = math.tan(math.pi * f0 / rate)
    a0 = 1.0 + k / q + k * k
    hp_b = np.array([1.0, -2.0, 1.0])
    hp_a = np.array([1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0])
    return [(shelf_b, shelf_a), (hp_b, hp_a)]


def measure_loudness_lufs(clip: AudioClip) -> float:
    """Integrated loudness with absolute (-70) and relative (-10) gating.

    Returns -inf for (near-)silence.
    """
    data = clip.samples.astype(np.float32)
    for b, a in _k_weighting_coeffs(clip.sample_rate):
        data = lfilter(b, a, data, axis=0)

    block = int(0.400 * clip.sample_rate)
    hop = block // 4  # 75% overlap
    if clip.frames < block:
        ms = float(np.mean(np.sum(data * data, axis=0) / max(clip.frames, 1)))
        return -math.inf if ms <= 0 else -0.691 + 10.0 * math.log10(ms)

    frame_power = np.sum(data * data, axis=1)
    cumulative = np.concatenate(([0.0], np.cumsum(frame_power)))
    starts = np.arange(0, clip.frames - block + 1, hop)
    powers = (cumulative[starts + block] - cumulative[starts]) / block
    loudness = np.full_like(powers, -math.inf)
    nz = powers > 0
    loudness[nz] = -0.691 + 10.0 * np.log10(powers[nz])

    mask = loudness > SILENCE_FLOOR_LUFS
    if not mask.any():
        return -math.inf
    ungated = -0.691 + 10.0 * math.log10(np.mean(powers[mask]))
    mask &= loudness > ungated - 10.0
    if not mask.any():
        return -math.inf
    return -0.691 + 10.0 * math.log10(float(np.mean(powers[mask])))


# --- assembly -------------------------------------------------------------


def assemble_episode(clips: list[AudioClip], spec: MixSpec) -> AudioClip:
    """Lay speech clips over looped, ducked background music and master it.

    Frame-exact duration: intro + sum(clips) + gap * (n - 1) + outro.
    """
    if not clips:
        raise EmptyClipList("no clips to assemble")
    rate = clips[0].sample_rate
    for clip in clips:
        if clip.sample_rate != rate:
            raise RateMismatch(
                f"clip at {clip.sample_rate} Hz; expected {rate} Hz"
            )

    intro = frames_for(spec.intro_lead, rate)
    gap = frames_for(spec.inter_turn_gap, rate)
    outro = frames_for(spec.outro_fade, rate)
    total = intro + sum(c.frames for c in clips) + gap * (len(clips) - 1) + outro

    speech = np.zeros((total, 2), dtype=np.float32)
    pos = intro
    for i, clip in enumerate(clips):
        stereo = to_stereo(clip)
        speech[pos:pos + clip.frames] = stereo.samples
        pos += clip.frames + (gap if i < len(clips) - 1 else 0)

    bgm = _bgm_bed(spec, rate, total, speech_start=intro, speech_end=total - outro)
    mix = speech + bgm
    mix = _normalize(AudioClip(mix, rate), spec.loudness_target_lufs)
    return mix


def _bgm_bed(spec: MixSpec, rate: int, total: int,
             speech_start: int, speech_end: int) -> np.ndarray:
    src = to_stereo(resample(spec.bgm_clip, rate)).samples
    if src.shape[0] == 0 or total == 0:
        return np.zeros((total, 2), dtype=np.float32)
    reps = total // src.shape[0] + 1
    bed = np.tile(src, (reps, 1))[:total].astype(np.float32)

    gain = np.full(total, 10.0 ** (spec.bgm_gain_db / 20.0), dtype=np.float32)
    gain[:speech_start] = 1.0  # full gain during the intro lead
    gain[speech_end:] = 1.0
    fade_len = total - speech_end
    if fade_len > 0:
        gain[speech_end:] *= np.linspace(1.0, 0.0, fade_len, dtype=np.float32)
    return bed * gain[:, None]


def _normalize(clip: AudioClip, target_lufs: float) -> AudioClip:
    data = clip.samples
    measured = measure_loudness_lufs(clip)
    if measured > SILENCE_FLOOR_LUFS:
        data = data * 10.0 ** ((target_lufs - measured) / 20.0)
    peak = float(np.max(np.abs(data))) if data.size else 0.0
    if peak > PEAK_CEILING:
        data = data * (PEAK_CEILING / peak)
    return AudioClip(data, clip.sample_rate)


# --- encoding -------------------------------------------------------------


def encode_wav_pcm16(clip: AudioClip) -> bytes:
    """RIFF/WAVE PCM16 container; 44-byte header, bit-exact for equal input."""
    pcm = np.clip(clip.samples, -1.0, 1.0)
    ints = np.round(pcm * 32767.0).astype("<i2")
    data = ints.tobytes()
    channels = clip.channels
    block_align = channels * 2
    header = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    header += b"fmt " + struct.pack(
        "<IHHIIHH", 16, 1, channels, clip.sample_rate,
        clip.sample_rate * block_align, block_align, 16,
    )
    header += b"data" + struct.pack("<I", len(data))
    return header + data


def decode_wav(blob: bytes) -> AudioClip:
    """Parse a PCM16 RIFF/WAVE byte string back into a clip."""
    if len(blob) < 44 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise ValueError("not a RIFF/WAVE file")
    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(blob):
        tag = blob[pos:pos + 4]
        size = struct.unpack("<I", blob[pos + 4:pos + 8])[0]
        body = blob[pos + 8:pos + 8 + size]
        if tag == b"fmt ":
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif tag == b"data":
            data = body
        pos += 8 + size + (size % 2)
    if fmt is None or data is None:
        raise ValueError("missing fmt or data chunk")
    _, channels, rate, _, _, bits = fmt
    if bits != 16:
        raise ValueError("only PCM16 supported")
    ints = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32767.0
    return AudioClip(ints.reshape(-1, channels), rate)


def encode_master(master: AudioClip, fmt: str = "wav_pcm16",
                  mp3_encoder=None) -> bytes:
    if fmt == "wav_pcm16":
        return encode_wav_pcm16(master)
    if fmt == "mp3":
        if mp3_encoder is None:
            raise EncoderUnavailable("no MP3 encoder configured")
        return mp3_encoder(master)
    raise ValueError(f"unknown format {fmt!r}")


def default_bgm(seconds: float = 8.0) -> AudioClip:
    """Soft two-tone loop used when no BGM directory is configured."""
    base = tone(seconds, 220.0, amplitude=0.08, channels=2)
    fifth = tone(seconds, 330.0, amplitude=0.05, channels=2)
    return AudioClip(base.samples + fifth.samples, base.sample_rate)
