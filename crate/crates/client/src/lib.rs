//! Async client for the SRS service's JSON API.
//!
//! Every method maps to one endpoint. Non-2xx responses surface as
//! [`ClientError::Api`] carrying the service's status and error code.

use reqwest::{Method, RequestBuilder, Response, Url};
use serde::de::DeserializeOwned;
use srs_core::render::{DocFormat, FhdFormat};
use srs_core::validation::ProfileName;
use srs_core::wire::{
    ApiErrorBody, DefinitionDto, DefinitionUpdate, DiagnosticDto, FunctionDto, FunctionUpdate, ProjectDto,
    RequirementDto, RequirementUpdate, SectionDto, SectionUpdate, SignoffDto, SignoffTitleUpdate, SignoffUpdate,
};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("invalid service URL `{0}`")]
    Url(String),
    #[error("request failed: {0}")]
    Http(#[from] reqwest::Error),
    #[error("{code}: {message} (HTTP {status})")]
    Api { status: u16, code: String, message: String },
}

impl ClientError {
    /// The service error code, if the service answered.
    pub fn code(&self) -> Option<&str> {
        match self {
            ClientError::Api { code, .. } => Some(code),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct SrsClient {
    base: Url,
    http: reqwest::Client,
}

impl SrsClient {
    /// `base_url` is the service root, e.g. `http://127.0.0.1:8830`.
    pub fn new(base_url: &str) -> Result<Self> {
        let mut base = Url::parse(base_url).map_err(|_| ClientError::Url(base_url.to_string()))?;
        if base.cannot_be_a_base() {
            return Err(ClientError::Url(base_url.to_string()));
        }
        if !base.path().ends_with('/') {
            let path = format!("{}/", base.path());
            base.set_path(&path);
        }
        Ok(Self {
            base,
            http: reqwest::Client::new(),
        })
    }

    pub fn base_url(&self) -> &Url {
        &self.base
    }

    /// Builds `<base>/api/<segments...>`, percent-encoding each segment.
    fn url(&self, segments: &[&str]) -> Url {
        let mut url = self.base.clone();
        {
            let mut path = url.path_segments_mut().expect("base URL");
            path.pop_if_empty().push("api");
            path.extend(segments);
        }
        url
    }

    fn request(&self, method: Method, segments: &[&str]) -> RequestBuilder {
        self.http.request(method, self.url(segments))
    }

    fn get_with(&self, segment: &str, key: &str, value: &str) -> RequestBuilder {
        let mut url = self.url(&[segment]);
        url.query_pairs_mut().append_pair(key, value);
        self.http.get(url)
    }

    async fn check(resp: Response) -> Result<Response> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp);
        }
        let text = resp.text().await?;
        let (code, message) = match serde_json::from_str::<ApiErrorBody>(&text) {
            Ok(body) => (body.code, body.message),
            Err(_) => ("E-HTTP".to_string(), text),
        };
        Err(ClientError::Api {
            status: status.as_u16(),
            code,
            message,
        })
    }

    async fn json<T: DeserializeOwned>(req: RequestBuilder) -> Result<T> {
        Ok(Self::check(req.send().await?).await?.json().await?)
    }

    async fn text(req: RequestBuilder) -> Result<String> {
        Ok(Self::check(req.send().await?).await?.text().await?)
    }

    async fn empty(req: RequestBuilder) -> Result<()> {
        Self::check(req.send().await?).await?;
        Ok(())
    }

    pub async fn project(&self) -> Result<ProjectDto> {
        Self::json(self.request(Method::GET, &["project"])).await
    }

    /// `body` is the section text, or `"NA"` for the not-applicable marker.
    pub async fn set_section(&self, path: &str, body: &str) -> Result<SectionDto> {
        let update = SectionUpdate { body: body.to_string() };
        Self::json(self.request(Method::PUT, &["sections", path]).json(&update)).await
    }

    pub async fn clear_section(&self, path: &str) -> Result<()> {
        Self::empty(self.request(Method::DELETE, &["sections", path])).await
    }

    pub async fn add_requirement(&self, req: &RequirementDto) -> Result<RequirementDto> {
        Self::json(self.request(Method::POST, &["requirements"]).json(req)).await
    }

    pub async fn update_requirement(&self, id: &str, update: &RequirementUpdate) -> Result<RequirementDto> {
        Self::json(self.request(Method::PUT, &["requirements", id]).json(update)).await
    }

    pub async fn remove_requirement(&self, id: &str) -> Result<()> {
        Self::empty(self.request(Method::DELETE, &["requirements", id])).await
    }

    pub async fn set_definition(&self, term: &str, meaning: &str) -> Result<DefinitionDto> {
        let update = DefinitionUpdate {
            meaning: meaning.to_string(),
        };
        Self::json(self.request(Method::PUT, &["definitions", term]).json(&update)).await
    }

    pub async fn remove_definition(&self, term: &str) -> Result<()> {
        Self::empty(self.request(Method::DELETE, &["definitions", term])).await
    }

    pub async fn set_function(&self, number: &str, title: &str) -> Result<FunctionDto> {
        let update = FunctionUpdate {
            title: title.to_string(),
        };
        Self::json(self.request(Method::PUT, &["functions", number]).json(&update)).await
    }

    pub async fn remove_function(&self, number: &str) -> Result<()> {
        Self::empty(self.request(Method::DELETE, &["functions", number])).await
    }

    pub async fn set_signoff(&self, role: &str, name: &str, date: Option<&str>) -> Result<SignoffDto> {
        let update = SignoffUpdate {
            name: name.to_string(),
            date: date.map(str::to_string),
        };
        Self::json(self.request(Method::PUT, &["signoffs", role]).json(&update)).await
    }

    pub async fn set_signoff_title(&self, title: Option<&str>) -> Result<Option<String>> {
        let update = SignoffTitleUpdate {
            title: title.map(str::to_string),
        };
        let got: SignoffTitleUpdate = Self::json(self.request(Method::PUT, &["signoff-title"]).json(&update)).await?;
        Ok(got.title)
    }

    pub async fn diagnostics(&self, profile: ProfileName) -> Result<Vec<DiagnosticDto>> {
        Self::json(self.get_with("diagnostics", "profile", &profile.to_string())).await
    }

    pub async fn render(&self, format: DocFormat) -> Result<String> {
        Self::text(self.get_with("render", "format", &format.to_string())).await
    }

    pub async fn fhd(&self, format: FhdFormat) -> Result<String> {
        Self::text(self.get_with("fhd", "format", &format.to_string())).await
    }
}
