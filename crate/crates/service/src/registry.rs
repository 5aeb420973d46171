use crate::ServiceError;
use mg_core::algebra::{algebraize, AlgebraicModel};
use mg_core::construction::{parse, Construction};
use rand::rngs::OsRng;
use rand::RngCore;
use serde_json::Value;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

/// A registered construction with its derived data.
pub struct Session {
    pub source: String,
    pub construction: Arc<Construction>,
    model: OnceLock<AlgebraicModel>,
    /// The most recent instance payload served for rendering.
    pub last_instance: Mutex<Option<Value>>,
}

impl Session {
    fn new(source: String) -> Result<Session, ServiceError> {
        let construction = Arc::new(parse(&source)?);
        Ok(Session { source, construction, model: OnceLock::new(), last_instance: Mutex::new(None) })
    }

    /// The WLOG algebraization, computed on first use.
    pub fn model(&self) -> &AlgebraicModel {
        self.model.get_or_init(|| algebraize(&self.construction, true))
    }
}

/// 128 random bits from the operating system, as 32 hex digits.
pub(crate) fn token() -> String {
    let mut bytes = [0u8; 16];
    OsRng.fill_bytes(&mut bytes);
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Sessions by id. Replacing a session's source swaps in a fresh
/// [`Session`], so derived data never outlives an edit.
#[derive(Default)]
pub struct Registry {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
}

impl Registry {
    pub fn insert(&self, source: String) -> Result<(String, Arc<Session>), ServiceError> {
        let session = Arc::new(Session::new(source)?);
        let id = token();
        self.sessions.write().expect("registry lock").insert(id.clone(), session.clone());
        Ok((id, session))
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, ServiceError> {
        self.sessions.read().expect("registry lock").get(id).cloned().ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    pub fn replace(&self, id: &str, source: String) -> Result<Arc<Session>, ServiceError> {
        let session = Arc::new(Session::new(source)?);
        let mut map = self.sessions.write().expect("registry lock");
        let slot = map.get_mut(id).ok_or_else(|| ServiceError::UnknownSession(id.to_string()))?;
        *slot = session.clone();
        Ok(session)
    }

    pub fn remove(&self, id: &str) -> Result<(), ServiceError> {
        match self.sessions.write().expect("registry lock").remove(id) {
            Some(_) => Ok(()),
            None => Err(ServiceError::UnknownSession(id.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("registry lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
