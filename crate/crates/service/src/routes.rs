use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request, State};
use axum::http::header::CONTENT_TYPE;
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use srs_core::render::{build_fhd, render, render_fhd, DocFormat, FhdFormat};
use srs_core::validation::{validate, Profile, ProfileName};
use srs_core::wire::{
    section_dto, DefinitionDto, DefinitionUpdate, DiagnosticDto, FunctionDto, FunctionUpdate, ProjectDto,
    RequirementDto, RequirementUpdate, SectionDto, SectionUpdate, SignoffDto, SignoffTitleUpdate, SignoffUpdate,
};
use srs_core::{FunctionNumber, ReqId, SectionPath, SignoffRole};
use tower_http::services::ServeDir;

use crate::error::{ApiError, E_JSON, E_QUERY, E_ROUTE};
use crate::state::AppState;

/// JSON body extractor whose rejections carry an error code.
pub struct ApiJson<T>(pub T);

impl<S, T> FromRequest<S> for ApiJson<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| ApiJson(v))
            .map_err(|r| ApiError::bad_request(E_JSON, r.body_text()))
    }
}

/// Single path segment, percent-decoded.
pub struct Segment(pub String);

impl<S: Send + Sync> FromRequestParts<S> for Segment {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        Path::<String>::from_request_parts(parts, state)
            .await
            .map(|Path(s)| Segment(s))
            .map_err(|r| ApiError::bad_request(E_ROUTE, r.body_text()))
    }
}

#[derive(Debug, Default, Deserialize)]
struct Params {
    format: Option<String>,
    profile: Option<String>,
}

struct ApiQuery(Params);

impl<S: Send + Sync> FromRequestParts<S> for ApiQuery {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        Query::<Params>::from_request_parts(parts, state)
            .await
            .map(|Query(p)| ApiQuery(p))
            .map_err(|r| ApiError::bad_request(E_QUERY, r.body_text()))
    }
}

fn query_value<T: std::str::FromStr<Err = String>>(value: Option<&str>, default: T) -> Result<T, ApiError> {
    match value {
        None => Ok(default),
        Some(v) => v.parse().map_err(|e: String| ApiError::bad_request(E_QUERY, e)),
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/project", get(get_project))
        .route("/sections/{path}", put(put_section).delete(delete_section))
        .route("/requirements", axum::routing::post(post_requirement))
        .route("/requirements/{id}", put(put_requirement).delete(delete_requirement))
        .route("/definitions/{term}", put(put_definition).delete(delete_definition))
        .route("/functions/{number}", put(put_function).delete(delete_function))
        .route("/signoffs/{role}", put(put_signoff))
        .route("/signoff-title", put(put_signoff_title))
        .route("/diagnostics", get(get_diagnostics))
        .route("/render", get(get_render))
        .route("/fhd", get(get_fhd))
        .fallback(no_route)
        .method_not_allowed_fallback(no_route);
    let app = Router::new().nest("/api", api);
    let app = match state.ui_dir() {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(index)).fallback(no_route),
    };
    app.with_state(state)
}

async fn no_route() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, E_ROUTE, "no such endpoint")
}

const INDEX: &str = r#"<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8" /><title>SRS service</title></head>
<body>
<h1>SRS service</h1>
<p>The editor bundle is not installed. Start the service with <code>--ui-dir</code> pointing at a built bundle.</p>
<ul>
<li><a href="/api/render?format=html">Rendered document</a></li>
<li><a href="/api/diagnostics?profile=strict">Diagnostics</a></li>
<li><a href="/api/fhd?format=tree">Function hierarchy</a></li>
<li><a href="/api/project">Project JSON</a></li>
</ul>
</body>
</html>
"#;

async fn index() -> Html<&'static str> {
    Html(INDEX)
}

type ApiResult<T> = Result<T, ApiError>;

async fn get_project(State(state): State<AppState>) -> ApiResult<Json<ProjectDto>> {
    Ok(Json(ProjectDto::from(&state.snapshot().await?)))
}

async fn put_section(
    State(state): State<AppState>,
    Segment(path): Segment,
    ApiJson(update): ApiJson<SectionUpdate>,
) -> ApiResult<Json<SectionDto>> {
    let path = SectionPath::parse(&path)?;
    let body = update.to_body()?;
    let p = state.mutate(|p| p.set_section(&path, body)).await?;
    Ok(Json(section_dto(&p, &path)?))
}

async fn delete_section(State(state): State<AppState>, Segment(path): Segment) -> ApiResult<StatusCode> {
    let path = SectionPath::parse(&path)?;
    state.mutate(|p| p.clear_section(&path)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn post_requirement(
    State(state): State<AppState>,
    ApiJson(dto): ApiJson<RequirementDto>,
) -> ApiResult<(StatusCode, Json<RequirementDto>)> {
    let req = dto.to_requirement()?;
    let id = req.id().clone();
    let p = state.mutate(|p| p.add_requirement(req)).await?;
    Ok((StatusCode::CREATED, Json(RequirementDto::from(&p.requirements()[&id]))))
}

async fn put_requirement(
    State(state): State<AppState>,
    Segment(id): Segment,
    ApiJson(update): ApiJson<RequirementUpdate>,
) -> ApiResult<Json<RequirementDto>> {
    let req = update.with_id(&id).to_requirement()?;
    let id = req.id().clone();
    let p = state.mutate(|p| p.update_requirement(req)).await?;
    Ok(Json(RequirementDto::from(&p.requirements()[&id])))
}

async fn delete_requirement(State(state): State<AppState>, Segment(id): Segment) -> ApiResult<StatusCode> {
    let id = ReqId::parse(&id)?;
    state.mutate(|p| p.remove_requirement(&id)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn put_definition(
    State(state): State<AppState>,
    Segment(term): Segment,
    ApiJson(update): ApiJson<DefinitionUpdate>,
) -> ApiResult<Json<DefinitionDto>> {
    let p = state.mutate(|p| p.set_definition(&term, &update.meaning)).await?;
    let d = p
        .definitions()
        .iter()
        .find(|d| d.term == term.trim())
        .expect("definition just stored");
    Ok(Json(DefinitionDto {
        term: d.term.clone(),
        meaning: d.meaning.clone(),
    }))
}

async fn delete_definition(State(state): State<AppState>, Segment(term): Segment) -> ApiResult<StatusCode> {
    state.mutate(|p| p.remove_definition(&term)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn put_function(
    State(state): State<AppState>,
    Segment(number): Segment,
    ApiJson(update): ApiJson<FunctionUpdate>,
) -> ApiResult<Json<FunctionDto>> {
    let num = FunctionNumber::parse(&number)?;
    let p = state.mutate(|p| p.set_function(num.clone(), &update.title)).await?;
    Ok(Json(FunctionDto {
        number: num.to_string(),
        title: p.functions()[&num].clone(),
    }))
}

async fn delete_function(State(state): State<AppState>, Segment(number): Segment) -> ApiResult<StatusCode> {
    let num = FunctionNumber::parse(&number)?;
    state.mutate(|p| p.remove_function(&num)).await?;
    Ok(StatusCode::NO_CONTENT)
}

async fn put_signoff(
    State(state): State<AppState>,
    Segment(role): Segment,
    ApiJson(update): ApiJson<SignoffUpdate>,
) -> ApiResult<Json<SignoffDto>> {
    let role: SignoffRole = role.parse()?;
    let date = update.parsed_date()?;
    let p = state.mutate(|p| p.set_signoff(role, &update.name, date)).await?;
    Ok(Json(SignoffDto::of(&p, role)))
}

async fn put_signoff_title(
    State(state): State<AppState>,
    ApiJson(update): ApiJson<SignoffTitleUpdate>,
) -> ApiResult<Json<SignoffTitleUpdate>> {
    let p = state.mutate(|p| p.set_signoff_title(update.title.as_deref())).await?;
    Ok(Json(SignoffTitleUpdate {
        title: p.signoff_title().map(str::to_string),
    }))
}

async fn get_diagnostics(State(state): State<AppState>, ApiQuery(q): ApiQuery) -> ApiResult<Json<Vec<DiagnosticDto>>> {
    let profile: ProfileName = query_value(q.profile.as_deref(), ProfileName::Strict)?;
    let p = state.snapshot().await?;
    let diags = validate(&p, &Profile::named(profile));
    Ok(Json(diags.iter().map(DiagnosticDto::from).collect()))
}

async fn get_render(State(state): State<AppState>, ApiQuery(q): ApiQuery) -> ApiResult<Response> {
    let format: DocFormat = query_value(q.format.as_deref(), DocFormat::Text)?;
    let doc = render(&state.snapshot().await?, format);
    Ok(([(CONTENT_TYPE, format.content_type())], doc.content).into_response())
}

async fn get_fhd(State(state): State<AppState>, ApiQuery(q): ApiQuery) -> ApiResult<Response> {
    let format: FhdFormat = query_value(q.format.as_deref(), FhdFormat::Tree)?;
    let tree = build_fhd(&state.snapshot().await?)?;
    Ok(([(CONTENT_TYPE, format.content_type())], render_fhd(&tree, format)).into_response())
}
