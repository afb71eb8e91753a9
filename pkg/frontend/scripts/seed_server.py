"""Boot a fixture-seeded pipeline server for the console e2e test.

Usage: python3 scripts/seed_server.py <data_dir> <port>

Trains small models, queues several speech items whose mock transcripts
carry low-confidence words (so the span-highlighting path is exercised),
then serves the HTTP API.
"""

import sys

import numpy as np
import uvicorn

from voxmod.audio import encode_wav
from voxmod.classify import train_linear_svm, train_random_forest
from voxmod.service import MockTranscriptionProvider, PipelineConfig, build_pipeline
from voxmod.service.api import create_app
from voxmod.synth import blank_speech_corpus, corpus_dataset, gender_corpus, speech_clip
from voxmod.text.transcript import Transcript, Word

TEXTS = [
    "main purbi champaran se bol raha hun ration khatam ho gaya",
    "patna zila se khabar hai paisa nahi mila",
    "hum ranchi ke rahne wale hain hospital me doctor nahi",
    "gaya se ek samasya hai bank band hai",
]


def seeded_transcript(text: str, rng: np.random.Generator) -> Transcript:
    words = []
    for i, token in enumerate(text.split()):
        confidence = 0.45 if i % 4 == 1 else round(float(rng.uniform(0.75, 0.99)), 2)
        words.append(Word(token, confidence))
    return Transcript(words=tuple(words), language="hi", source="mock-asr")


def main() -> None:
    data_dir, port = sys.argv[1], int(sys.argv[2])
    rng = np.random.default_rng(42)

    blank_data = corpus_dataset(blank_speech_corpus(30, 30, seed=900), ("blank", "accepted"))
    blank_model = train_random_forest(blank_data, n_trees=15, seed=0)
    gender_data = corpus_dataset(gender_corpus(20, 20, seed=901), ("male", "female"))
    gender_model = train_linear_svm(gender_data, seed=0)

    provider = MockTranscriptionProvider()
    pipeline = build_pipeline(PipelineConfig(data_dir=data_dir), provider=provider)
    pipeline.store.install_model("blank", blank_model, "seed-blank")
    pipeline.store.install_model("gender", gender_model, "seed-gender")

    queued = 0
    for i, text in enumerate(TEXTS * 2):
        clip = speech_clip(f"e2e-{i:02d}", rng, duration_s=float(rng.uniform(15, 45)))
        provider.add_clip(clip, seeded_transcript(text, rng))
        item = pipeline.ingest_bytes(encode_wav(clip), f"e2e-{i:02d}.wav")
        processed = pipeline.process_item(item.id)
        if processed.state.value == "pending_review":
            queued += 1
    print(f"seeded {queued} pending items", flush=True)
    uvicorn.run(create_app(pipeline), host="127.0.0.1", port=port, log_level="warning")


if __name__ == "__main__":
    main()
