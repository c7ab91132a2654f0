"""Chat-completions-style HTTP client for judge models.

Vendors differ only in configuration (base URL, key, model id), never in
code. Rate limits and server errors retry with exponential backoff; the raw
response content string comes back for the engine to parse.
"""

from __future__ import annotations

import os
import threading
import time
from typing import Callable

import requests

ENV_URL = "JUDGE_URL"
ENV_API_KEY = "JUDGE_API_KEY"
ENV_MODEL = "JUDGE_MODEL"


class JudgeError(Exception):
    pass


class RateLimiter:
    """Shared minimum spacing between request starts across worker threads."""

    def __init__(self, min_interval_s: float, clock=time.monotonic, sleep=time.sleep):
        self.min_interval_s = min_interval_s
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_allowed = 0.0

    def acquire(self) -> None:
        if self.min_interval_s <= 0:
            return
        while True:
            with self._lock:
                now = self._clock()
                if now >= self._next_allowed:
                    self._next_allowed = now + self.min_interval_s
                    return
                wait = self._next_allowed - now
            self._sleep(wait)


class JudgeClient:
    def __init__(
        self,
        base_url: str,
        model_id: str,
        api_key: str = "",
        temperature: float = 0.0,
        *,
        post: Callable[[str, dict, dict], dict] | None = None,
        max_attempts: int = 3,
        backoff_s: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
        timeout_s: float = 120.0,
        rate_limiter: RateLimiter | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.api_key = api_key
        self.temperature = temperature
        self.max_attempts = max_attempts
        self.backoff_s = backoff_s
        self._sleep = sleep
        self._timeout_s = timeout_s
        self._post = post or self._http_post
        self.rate_limiter = rate_limiter
        self.request_count = 0

    @classmethod
    def from_env(cls, model_id: str | None = None) -> "JudgeClient":
        url = os.environ.get(ENV_URL)
        model = model_id or os.environ.get(ENV_MODEL)
        if not url or not model:
            raise JudgeError(
                f"judge provider not configured: set {ENV_URL} and {ENV_MODEL}"
            )
        return cls(
            base_url=url,
            model_id=model,
            api_key=os.environ.get(ENV_API_KEY, ""),
        )

    def _http_post(self, url: str, payload: dict, headers: dict) -> dict:
        response = requests.post(
            url, json=payload, headers=headers, timeout=self._timeout_s
        )
        if response.status_code == 429 or response.status_code >= 500:
            raise JudgeError(f"provider returned {response.status_code}")
        response.raise_for_status()
        return response.json()

    def complete(self, prompt: str) -> str:
        """One structured completion; returns the raw content string."""
        payload = {
            "model": self.model_id,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
            "response_format": {"type": "json_object"},
        }
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            try:
                if self.rate_limiter is not None:
                    self.rate_limiter.acquire()
                self.request_count += 1
                body = self._post(
                    f"{self.base_url}/chat/completions", payload, headers
                )
                return body["choices"][0]["message"]["content"]
            except (requests.RequestException, JudgeError, KeyError, IndexError) as exc:
                last_error = exc
                if attempt + 1 < self.max_attempts:
                    self._sleep(self.backoff_s * (2**attempt))
        raise JudgeError(
            f"judge request failed after {self.max_attempts} attempts: {last_error}"
        )
