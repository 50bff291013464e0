"""Round-robin session generation against OpenAI-compatible chat endpoints.

One game-master agent and a fixed-order list of player agents take turns:
the GM opens, each player in order receives the GM reply plus every earlier
player reply of the current cycle, and the full cycle is handed back to the
GM. The loop stops once any player has spoken ``max_interactions_per_player``
times, when the wall clock runs out, or on a terminal endpoint error, and
the transcript is flushed to disk after every single turn so a crash never
loses completed turns.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

import requests

from .errors import InputError, ToolkitError
from .ingest import ROLE_GM, ROLE_PLAYER, Transcript, Turn

DEFAULT_OPENING_PROMPT = "Please start the adventure!"
DEFAULT_GM_SYSTEM_MESSAGE = (
    "You are the Dungeon Master of a fantasy role-playing game. Your task is "
    "to guide a group of adventurers through a dungeon filled with monsters, "
    "traps, and treasure. The Adventure is "
)
DEFAULT_PLAYER_SYSTEM_MESSAGE = (
    "You are a Dungeons and Dragons player and take the role of "
)

HISTORY_FULL = "full"
HISTORY_STATELESS = "stateless"

# (temperature, max_tokens) presets per agent seat, from conservative to
# adventurous sampling
AGENT_PRESETS: dict[str, dict[str, tuple[float, int]]] = {
    "low-temp": {"Master": (0.3, 200), "Grog": (0.4, 100), "Pike": (0.3, 100), "Vax": (0.3, 50)},
    "mid-temp": {"Master": (0.5, 200), "Grog": (0.7, 100), "Pike": (0.5, 100), "Vax": (0.4, 50)},
    "high-temp": {"Master": (1.0, 200), "Grog": (0.7, 100), "Pike": (0.5, 100), "Vax": (0.4, 50)},
}


class EndpointError(ToolkitError):
    """The chat endpoint failed in a way retries will not fix."""


class TransientEndpointError(EndpointError):
    """Rate limit or flaky upstream; worth retrying with backoff."""


class TokenLimitError(EndpointError):
    """Quota or context budget exhausted; the session must end."""


class SessionAborted(EndpointError):
    """A session ended early; ``transcript`` holds the completed turns."""

    def __init__(self, message: str, transcript: Transcript):
        super().__init__(message)
        self.transcript = transcript


@dataclass(frozen=True)
class AgentSpec:
    name: str
    role: str  # gm | player
    system_message: str
    temperature: float
    max_tokens: int
    model: str

    def __post_init__(self) -> None:
        if self.role not in (ROLE_GM, ROLE_PLAYER):
            raise InputError(f"agent role must be gm or player, got {self.role!r}")
        if not 0.0 <= self.temperature <= 2.0:
            raise InputError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_tokens < 1:
            raise InputError("max_tokens must be positive")
        if not self.name:
            raise InputError("agent needs a name")


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 4
    base_backoff: float = 0.5

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise InputError("max_attempts must be >= 1")
        if self.base_backoff < 0:
            raise InputError("base_backoff must be >= 0")


@dataclass(frozen=True)
class SessionConfig:
    agents: tuple[AgentSpec, ...]  # gm first, then players in speaking order
    adventure_text: str = ""
    opening_prompt: str = DEFAULT_OPENING_PROMPT
    max_interactions_per_player: int = 200
    endpoint: str = ""
    api_key: str | None = None
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    history: str = HISTORY_FULL
    wall_clock_limit_s: float = 1800.0
    adventure_char_limit: int | None = None

    def __post_init__(self) -> None:
        gms = [a for a in self.agents if a.role == ROLE_GM]
        if len(gms) != 1:
            raise InputError(f"exactly one gm agent required, found {len(gms)}")
        if not self.agents or self.agents[0].role != ROLE_GM:
            raise InputError("the gm must be the first agent")
        if len(self.agents) < 2:
            raise InputError("at least one player agent required")
        if self.max_interactions_per_player < 1:
            raise InputError("max_interactions_per_player must be >= 1")
        if self.history not in (HISTORY_FULL, HISTORY_STATELESS):
            raise InputError(f"unknown history mode {self.history!r}")
        names = [a.name for a in self.agents]
        if len(set(names)) != len(names):
            raise InputError("agent names must be unique")

    @property
    def gm(self) -> AgentSpec:
        return self.agents[0]

    @property
    def players(self) -> tuple[AgentSpec, ...]:
        return self.agents[1:]


@dataclass(frozen=True)
class TurnContext:
    recipient: str
    assembled_input: str

    def __post_init__(self) -> None:
        if not self.assembled_input:
            raise InputError("assembled input must be non-empty")


def assemble_input(
    cycle_state: Sequence[tuple[str, str]], recipient: AgentSpec
) -> TurnContext:
    """Concatenate the current cycle's replies for the next speaker.

    ``cycle_state`` is the ordered (speaker name, text) list of the cycle so
    far: for player k that is the GM plus players 1..k-1, for the GM it is
    the entire previous cycle. The GM reply must come first when a player is
    the recipient.
    """
    if recipient.role == ROLE_PLAYER and not cycle_state:
        raise InputError(f"no gm reply available for player {recipient.name}")
    assembled = "\n".join(f"{name}: {text}" for name, text in cycle_state)
    return TurnContext(recipient=recipient.name, assembled_input=assembled)


class ChatClient(Protocol):
    def complete(
        self,
        *,
        model: str,
        messages: Sequence[Mapping[str, str]],
        temperature: float,
        max_tokens: int,
    ) -> str:
        """Return the assistant text or raise an EndpointError subclass."""


_TOKEN_LIMIT_MARKERS = ("insufficient_quota", "context_length", "token limit", "tokens_exceeded")


class HttpChatClient:
    """Minimal OpenAI-compatible chat-completions client."""

    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 120.0):
        if not endpoint:
            raise InputError("endpoint url required")
        url = endpoint.rstrip("/")
        if not url.endswith("/chat/completions"):
            url = url + "/chat/completions"
        self.url = url
        self.api_key = api_key
        self.timeout = timeout
        self._session = requests.Session()

    def complete(self, *, model, messages, temperature, max_tokens):
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": model,
            "messages": list(messages),
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        try:
            response = self._session.post(
                self.url, json=payload, headers=headers, timeout=self.timeout
            )
        except requests.RequestException as err:
            raise TransientEndpointError(f"request failed: {err}") from err
        if response.status_code != 200:
            body = response.text[:500].lower()
            if any(marker in body for marker in _TOKEN_LIMIT_MARKERS):
                raise TokenLimitError(f"token limit: {response.status_code} {body}")
            if response.status_code == 429 or response.status_code >= 500:
                raise TransientEndpointError(f"{response.status_code}: {body}")
            raise EndpointError(f"{response.status_code}: {body}")
        try:
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as err:
            raise EndpointError(f"malformed completion response: {err}") from err


def chat_complete(
    agent: AgentSpec,
    context: TurnContext,
    client: ChatClient,
    history: Sequence[Mapping[str, str]] = (),
    retry: RetryPolicy = RetryPolicy(),
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """One completion with exponential backoff on transient failures.

    Token-limit errors are terminal and re-raised untouched; exhausted
    retries escalate to a terminal EndpointError.
    """
    messages = [{"role": "system", "content": agent.system_message}]
    messages.extend(history)
    messages.append({"role": "user", "content": context.assembled_input})
    last_error: TransientEndpointError | None = None
    for attempt in range(retry.max_attempts):
        try:
            return client.complete(
                model=agent.model,
                messages=messages,
                temperature=agent.temperature,
                max_tokens=agent.max_tokens,
            )
        except TransientEndpointError as err:
            last_error = err
            if attempt + 1 < retry.max_attempts:
                sleep(retry.base_backoff * (2**attempt))
    raise EndpointError(
        f"gave up after {retry.max_attempts} attempts for {agent.name}: {last_error}"
    )


class TranscriptWriter:
    """Append-only jsonl sink, flushed after every turn."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._handle = self.path.open("w", encoding="utf-8")

    def write(self, turn: Turn) -> None:
        self._handle.write(_turn_to_json(turn) + "\n")
        self._handle.flush()

    def close(self) -> None:
        self._handle.close()

    def __enter__(self) -> "TranscriptWriter":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def _turn_to_json(turn: Turn) -> str:
    return json.dumps(
        {
            "turn": turn.turn_index,
            "speaker": turn.speaker,
            "role": turn.role,
            "content": turn.content,
            "model": turn.model,
            "temperature": turn.temperature,
        },
        ensure_ascii=False,
    )


def _gm_system_message(config: SessionConfig) -> str:
    adventure = config.adventure_text
    if config.adventure_char_limit is not None and len(adventure) > config.adventure_char_limit:
        adventure = adventure[: config.adventure_char_limit]
    if not adventure:
        return config.gm.system_message
    return config.gm.system_message + adventure


def run_session(
    config: SessionConfig,
    client: ChatClient,
    writer: TranscriptWriter | None = None,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], float] = time.monotonic,
) -> Transcript:
    """Drive the full round-robin loop and return the persisted transcript.

    Turn order is GM, player 1..k, GM, player 1..k, ... beginning with the
    opening prompt sent to the GM; after the last full cycle the GM still
    receives the cycle's replies before the interaction cap is checked. On a
    terminal endpoint error the completed turns are flushed and re-raised
    inside SessionAborted.
    """
    gm = replace(config.gm, system_message=_gm_system_message(config))
    players = config.players
    histories: dict[str, list[dict[str, str]]] = {a.name: [] for a in config.agents}
    turns: list[Turn] = []
    started = clock()

    def take_turn(agent: AgentSpec, context: TurnContext) -> str:
        reply = chat_complete(
            agent,
            context,
            client,
            history=histories[agent.name] if config.history == HISTORY_FULL else (),
            retry=config.retry,
            sleep=sleep,
        )
        if config.history == HISTORY_FULL:
            histories[agent.name].append({"role": "user", "content": context.assembled_input})
            histories[agent.name].append({"role": "assistant", "content": reply})
        turn = Turn(
            turn_index=len(turns),
            speaker=agent.name,
            role=agent.role,
            content=reply,
            model=agent.model,
            temperature=agent.temperature,
        )
        turns.append(turn)
        if writer is not None:
            writer.write(turn)
        return reply

    player_turn_counts = {p.name: 0 for p in players}
    try:
        gm_reply = take_turn(gm, TurnContext(gm.name, config.opening_prompt))
        while True:
            cycle: list[tuple[str, str]] = [(gm.name, gm_reply)]
            for player in players:
                reply = take_turn(player, assemble_input(cycle, player))
                player_turn_counts[player.name] += 1
                cycle.append((player.name, reply))
            gm_reply = take_turn(gm, assemble_input(cycle, gm))
            if max(player_turn_counts.values()) >= config.max_interactions_per_player:
                break
            if clock() - started > config.wall_clock_limit_s:
                break
    except EndpointError as err:
        raise SessionAborted(str(err), Transcript(tuple(turns))) from err
    return Transcript(tuple(turns))


def render_transcript(transcript: Transcript, format: str) -> bytes:
    """Serialise a transcript as jsonl or ``NAME: content`` speaker lines.

    The speaker-lines form uppercases names (the reader keys on all-caps
    prefixes) and flattens newlines in content to spaces, so only the jsonl
    form is fully lossless.
    """
    if not transcript.turns:
        raise InputError("empty transcript")
    if format == "jsonl":
        return ("\n".join(_turn_to_json(t) for t in transcript.turns) + "\n").encode("utf-8")
    if format == "speaker-lines":
        lines = [
            f"{t.speaker.upper()}: {' '.join(t.content.splitlines())}"
            for t in transcript.turns
        ]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise InputError(f"unknown transcript format {format!r}")


def build_agents(
    model: str,
    preset: str = "mid-temp",
    characters: Mapping[str, str] | None = None,
    adventure_hook: str = DEFAULT_GM_SYSTEM_MESSAGE,
) -> tuple[AgentSpec, ...]:
    """Agents for the standard four-seat table, in speaking order.

    ``characters`` maps player names to their descriptions; names absent
    from the preset table reuse the last player seat's sampling parameters.
    """
    if preset not in AGENT_PRESETS:
        raise InputError(f"unknown preset {preset!r} (have {', '.join(AGENT_PRESETS)})")
    table = AGENT_PRESETS[preset]
    characters = characters or {
        name: f"{name}, an adventurer." for name in table if name != "Master"
    }
    gm_temp, gm_tokens = table["Master"]
    agents = [
        AgentSpec(
            name="Master",
            role=ROLE_GM,
            system_message=adventure_hook,
            temperature=gm_temp,
            max_tokens=gm_tokens,
            model=model,
        )
    ]
    fallback = list(table.values())[-1]
    for name, description in characters.items():
        temp, tokens = table.get(name, fallback)
        agents.append(
            AgentSpec(
                name=name,
                role=ROLE_PLAYER,
                system_message=DEFAULT_PLAYER_SYSTEM_MESSAGE + description,
                temperature=temp,
                max_tokens=tokens,
                model=model,
            )
        )
    return tuple(agents)
