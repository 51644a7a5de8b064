//! Live game sessions keyed by opaque ids. Commands on one session are
//! serialized by that session's own lock; the id table is locked only long
//! enough to look a session up.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use serde_json::json;
use thiserror::Error;

use crate::game::{ConfigError, Game, GameConfig};

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(10 * 60);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error(transparent)]
    InvalidConfig(#[from] ConfigError),
    #[error("no game with id `{0}`")]
    UnknownSession(String),
}

#[derive(Debug)]
pub struct GameSession {
    pub id: String,
    pub game: Game,
    last_used: Instant,
}

impl GameSession {
    /// `{world, over}`
    pub fn view(&self) -> serde_json::Value {
        json!({ "world": self.game.world.to_json(), "over": self.game.over() })
    }

    /// `{world, over, tick_count}`
    pub fn status(&self) -> serde_json::Value {
        json!({ "world": self.game.world.to_json(), "over": self.game.over(), "tick_count": self.game.ticks })
    }

    pub fn scene(&self) -> serde_json::Value {
        self.game.scene().to_json()
    }
}

type Shared = Arc<Mutex<GameSession>>;

#[derive(Debug)]
pub struct SessionStore {
    sessions: Mutex<HashMap<String, Shared>>,
    idle_timeout: Duration,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(DEFAULT_IDLE_TIMEOUT)
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // A panic while holding a session lock leaves the game in its last
    // consistent state, since transitions are computed before assignment.
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> Self {
        Self { sessions: Mutex::new(HashMap::new()), idle_timeout }
    }

    /// Starts a game and returns `{id, world}`.
    pub fn create(&self, seed: u64, config: GameConfig) -> Result<serde_json::Value, ServiceError> {
        let game = Game::new(seed, config)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let world = game.world.to_json();
        let session = GameSession { id: id.clone(), game, last_used: Instant::now() };
        let mut sessions = lock(&self.sessions);
        Self::purge(&mut sessions, Instant::now(), self.idle_timeout);
        sessions.insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(json!({ "id": id, "world": world }))
    }

    /// Runs `f` with exclusive access to one session.
    pub fn with_session<R>(&self, id: &str, f: impl FnOnce(&mut GameSession) -> R) -> Result<R, ServiceError> {
        let shared = {
            let mut sessions = lock(&self.sessions);
            Self::purge(&mut sessions, Instant::now(), self.idle_timeout);
            sessions.get(id).cloned().ok_or_else(|| ServiceError::UnknownSession(id.to_string()))?
        };
        let mut session = lock(&shared);
        session.last_used = Instant::now();
        Ok(f(&mut session))
    }

    pub fn key(&self, id: &str, key: &str) -> Result<serde_json::Value, ServiceError> {
        self.with_session(id, |s| {
            s.game.key(key);
            s.view()
        })
    }

    pub fn tick(&self, id: &str) -> Result<serde_json::Value, ServiceError> {
        self.with_session(id, |s| {
            s.game.tick();
            s.view()
        })
    }

    pub fn scene(&self, id: &str) -> Result<serde_json::Value, ServiceError> {
        self.with_session(id, |s| s.scene())
    }

    pub fn status(&self, id: &str) -> Result<serde_json::Value, ServiceError> {
        self.with_session(id, |s| s.status())
    }

    pub fn len(&self) -> usize {
        lock(&self.sessions).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than the timeout as of `now`.
    pub fn purge_expired(&self, now: Instant) {
        Self::purge(&mut lock(&self.sessions), now, self.idle_timeout);
    }

    fn purge(sessions: &mut HashMap<String, Shared>, now: Instant, timeout: Duration) {
        // Sessions busy with a command are in use and never idle.
        sessions.retain(|_, s| match s.try_lock() {
            Ok(s) => now.saturating_duration_since(s.last_used) <= timeout,
            Err(_) => true,
        });
    }
}
