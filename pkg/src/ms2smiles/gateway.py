"""Provider-agnostic chat-completion client with caching and retry.

One file per cache key under ``<run_dir>/cache``; writes are atomic
(temp file + rename) so concurrent writers of the same key converge.  The
API key is read from the environment at request time and never written to
config, cache, or logs.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import requests

from .protocol import PromptInstance

RETRYABLE_STATUSES = frozenset({408, 429, 500, 502, 503, 504})

STATUS_OK = "ok"
STATUS_HTTP_ERROR = "http_error"
STATUS_TIMEOUT = "timeout"
STATUS_RATE_LIMITED = "rate_limited_exhausted"
STATUS_TRANSPORT_ERROR = "transport_error"


class MissingApiKey(RuntimeError):
    pass


class _Retryable(Exception):
    def __init__(self, status: str, detail: str):
        super().__init__(detail)
        self.status = status


class _Fatal(Exception):
    def __init__(self, status: str, detail: str):
        super().__init__(detail)
        self.status = status


@dataclass
class ProviderConfig:
    """Connection and sampling settings; the key itself stays in the env."""

    endpoint_url: str = ""
    model_name: str = "mock"
    api_key_env: str = "MS2SMILES_API_KEY"
    temperature: float = 0.0
    max_tokens: int = 2048
    request_timeout: float = 60.0
    max_retries: int = 3
    parallelism: int = 4
    retry_base_delay: float = 1.0


@dataclass(frozen=True)
class CompletionOutcome:
    record_id: str
    status: str
    transcript: str = ""
    attempts: int = 0
    cached: bool = False


def cache_key(prompt: str, config: ProviderConfig) -> str:
    """Stable digest over everything that determines a completion."""
    payload = json.dumps(
        [prompt, config.model_name, config.temperature, config.max_tokens],
        ensure_ascii=False,
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class TranscriptCache:
    """Filesystem cache: ``<key>.txt`` transcript plus a ``.meta`` sidecar."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def get(self, key: str) -> str | None:
        path = self.directory / f"{key}.txt"
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    def put(self, key: str, transcript: str, model: str, attempts: int) -> None:
        self._atomic_write(self.directory / f"{key}.txt", transcript)
        meta = json.dumps({"timestamp": time.time(), "model": model, "attempts": attempts})
        self._atomic_write(self.directory / f"{key}.meta", meta + "\n")

    @staticmethod
    def _atomic_write(path: Path, content: str) -> None:
        tmp = path.with_suffix(path.suffix + f".tmp{os.getpid()}.{threading.get_ident()}")
        tmp.write_text(content, encoding="utf-8")
        os.replace(tmp, path)


def _default_payload(prompt: str, config: ProviderConfig) -> dict:
    return {
        "model": config.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }


def _default_extract(body: dict) -> str:
    return body["choices"][0]["message"]["content"]


class HttpChatProvider:
    """Chat-completions HTTP transport.

    ``build_payload``/``extract_text`` are the adapter hooks for providers
    with divergent wire schemas.
    """

    def __init__(
        self,
        build_payload: Callable[[str, ProviderConfig], dict] = _default_payload,
        extract_text: Callable[[dict], str] = _default_extract,
        post: Callable | None = None,
    ):
        self.build_payload = build_payload
        self.extract_text = extract_text
        self._post = post or requests.post

    def fetch(self, prompt: str, config: ProviderConfig, record_id: str) -> str:
        api_key = os.environ.get(config.api_key_env)
        if not api_key:
            raise MissingApiKey(f"environment variable {config.api_key_env} is not set")
        headers = {"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"}
        try:
            response = self._post(
                config.endpoint_url,
                json=self.build_payload(prompt, config),
                headers=headers,
                timeout=config.request_timeout,
            )
        except requests.Timeout as exc:
            raise _Retryable(STATUS_TIMEOUT, str(exc)) from exc
        except requests.RequestException as exc:
            raise _Retryable(STATUS_TRANSPORT_ERROR, str(exc)) from exc
        status_code = response.status_code
        if status_code in RETRYABLE_STATUSES:
            kind = STATUS_RATE_LIMITED if status_code == 429 else STATUS_HTTP_ERROR
            raise _Retryable(kind, f"HTTP {status_code}")
        if status_code != 200:
            raise _Fatal(STATUS_HTTP_ERROR, f"HTTP {status_code}")
        try:
            text = self.extract_text(response.json())
        except Exception as exc:
            raise _Fatal(STATUS_HTTP_ERROR, f"malformed response body: {exc}") from exc
        if not text:
            raise _Fatal(STATUS_HTTP_ERROR, "empty completion")
        return text


class MockProvider:
    """Replays transcripts from ``<directory>/<record_id>.txt``."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch(self, prompt: str, config: ProviderConfig, record_id: str) -> str:
        path = self.directory / f"{record_id}.txt"
        if not path.exists():
            raise _Fatal(STATUS_TRANSPORT_ERROR, f"no mock transcript for {record_id}")
        text = path.read_text(encoding="utf-8")
        if not text:
            raise _Fatal(STATUS_HTTP_ERROR, f"empty mock transcript for {record_id}")
        return text


def complete(
    prompt: str,
    config: ProviderConfig,
    cache: TranscriptCache,
    provider,
    record_id: str = "",
    sleep: Callable[[float], None] = time.sleep,
) -> CompletionOutcome:
    """Cache-first completion with exponential backoff on retryable failures."""
    key = cache_key(prompt, config)
    hit = cache.get(key)
    if hit is not None:
        return CompletionOutcome(record_id=record_id, status=STATUS_OK, transcript=hit, attempts=0, cached=True)

    attempts = 0
    last_status = STATUS_TRANSPORT_ERROR
    while attempts <= config.max_retries:
        attempts += 1
        try:
            text = provider.fetch(prompt, config, record_id)
        except _Retryable as exc:
            last_status = exc.status
            if attempts > config.max_retries:
                break
            delay = min(config.retry_base_delay * (2 ** (attempts - 1)), 30.0)
            sleep(random.uniform(0, delay))
            continue
        except _Fatal as exc:
            return CompletionOutcome(record_id=record_id, status=exc.status, attempts=attempts)
        cache.put(key, text, config.model_name, attempts)
        return CompletionOutcome(record_id=record_id, status=STATUS_OK, transcript=text, attempts=attempts)
    return CompletionOutcome(record_id=record_id, status=last_status, attempts=attempts)


def run_batch(
    instances: Sequence[PromptInstance],
    config: ProviderConfig,
    cache: TranscriptCache,
    provider,
    sleep: Callable[[float], None] = time.sleep,
    progress_every: int = 100,
    log: Callable[[str], None] | None = None,
) -> list[CompletionOutcome]:
    """Complete every prompt, preserving input order.

    At most ``config.parallelism`` requests are in flight; cached records
    cause no network traffic, so an interrupted batch resumes where it
    stopped.
    """
    if config.parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    emit = log or (lambda line: print(line, file=sys.stderr))
    done = 0
    lock = threading.Lock()

    def one(instance: PromptInstance) -> CompletionOutcome:
        nonlocal done
        outcome = complete(instance.text, config, cache, provider, record_id=instance.record_id, sleep=sleep)
        with lock:
            done += 1
            if progress_every and done % progress_every == 0:
                emit(f"completed {done}/{len(instances)}")
        return outcome

    if config.parallelism == 1:
        return [one(instance) for instance in instances]
    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        return list(pool.map(one, instances))
