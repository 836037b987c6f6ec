use std::path::PathBuf;

use srs_client::{ClientError, SrsClient};
use srs_core::format::load;
use srs_core::render::{render, DocFormat, FhdFormat};
use srs_core::validation::ProfileName;
use srs_core::wire::{RequirementDto, RequirementUpdate};
use srs_service::{ServeConfig, Server};

async fn start() -> (SrsClient, PathBuf, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("project.srs");
    std::fs::copy(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/atm.srs"),
        &file,
    )
    .unwrap();
    let server = Server::bind(ServeConfig {
        file: file.clone(),
        addr: "127.0.0.1:0".parse().unwrap(),
        ui_dir: None,
    })
    .await
    .unwrap();
    let client = SrsClient::new(&format!("http://{}", server.local_addr())).unwrap();
    tokio::spawn(server.run(std::future::pending()));
    (client, file, dir)
}

fn api_code(e: ClientError) -> (u16, String) {
    match e {
        ClientError::Api { status, code, .. } => (status, code),
        other => panic!("expected API error, got {other}"),
    }
}

#[tokio::test]
async fn every_endpoint() {
    let (c, file, _dir) = start().await;
    assert_eq!(c.project().await.unwrap().title, "SRS ATM");

    assert_eq!(
        c.set_section("introduction.references", "See the bank's manual.")
            .await
            .unwrap()
            .state,
        "filled"
    );
    c.clear_section("introduction.references").await.unwrap();
    assert_eq!(
        api_code(c.set_section("nope", "x").await.unwrap_err()),
        (404, "E-PATH".into())
    );

    let fr2 = RequirementDto {
        id: "FR-2".into(),
        kind: "functional".into(),
        title: "Withdraw".into(),
        text: "Dispense cash.".into(),
        trace: vec![],
    };
    assert_eq!(c.add_requirement(&fr2).await.unwrap(), fr2);
    assert_eq!(
        api_code(c.add_requirement(&fr2).await.unwrap_err()),
        (409, "duplicate-id".into())
    );
    let updated = c
        .update_requirement(
            "FR-2",
            &RequirementUpdate {
                kind: "functional".into(),
                title: "Withdraw cash".into(),
                text: "Dispense cash.".into(),
                trace: vec!["UI-1".into()],
            },
        )
        .await
        .unwrap();
    assert_eq!(updated.trace, ["UI-1"]);
    c.remove_requirement("FR-2").await.unwrap();

    // terms with reserved characters survive the path segment
    let d = c.set_definition("PIN / code", "Personal number.").await.unwrap();
    assert_eq!(d.term, "PIN / code");
    c.remove_definition("PIN / code").await.unwrap();

    c.set_function("1.1", "Show balance").await.unwrap();
    assert_eq!(
        c.fhd(FhdFormat::Tree).await.unwrap(),
        "SRS ATM\n  1 Get Balance Information\n    1.1 Show balance\n"
    );
    c.remove_function("1.1").await.unwrap();

    let s = c
        .set_signoff("coord-engineering", "E. Director", Some("2024-02-29"))
        .await
        .unwrap();
    assert_eq!(s.display_name, "Director, Engineering");
    assert_eq!(
        c.set_signoff_title(Some("Custom title")).await.unwrap().as_deref(),
        Some("Custom title")
    );

    let p = load(&file).unwrap();
    for format in [DocFormat::Text, DocFormat::Markdown, DocFormat::Html] {
        assert_eq!(c.render(format).await.unwrap(), render(&p, format).content);
    }
    assert!(c.diagnostics(ProfileName::Lenient).await.unwrap().is_empty());
    c.set_signoff("coord-engineering", "E. Director", None).await.unwrap();
    let diags = c.diagnostics(ProfileName::Strict).await.unwrap();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, "V-SIGN-DATE");
}

#[tokio::test]
async fn transport_and_url_errors() {
    assert!(matches!(SrsClient::new("not a url"), Err(ClientError::Url(_))));
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let c = SrsClient::new(&format!("http://127.0.0.1:{port}/")).unwrap();
    let err = c.project().await.unwrap_err();
    assert!(matches!(err, ClientError::Http(_)), "{err}");
    assert_eq!(err.code(), None);
}
